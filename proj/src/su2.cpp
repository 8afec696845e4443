#include "um/su2.hpp"

namespace um {

namespace {
constexpr Complex I{0.0, 1.0};

std::array<Matrix2, 3> make_pauli() {
  std::array<Matrix2, 3> t;
  t[0] << 0, 1, 1, 0;
  t[1] << 0, -I, I, 0;
  t[2] << 1, 0, 0, -1;
  return t;
}

std::array<Matrix2, 4> make_sigma(Complex unit) {
  const auto& t = pauli();
  std::array<Matrix2, 4> s;
  for (int a = 0; a < 3; ++a) s[a] = unit * t[a];
  s[3] = Matrix2::Identity();
  return s;
}

int epsilon3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  // parity of the permutation (i j k) of (1 2 3)
  int swaps = 0;
  int v[3] = {i, j, k};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2 - a; ++b)
      if (v[b] > v[b + 1]) {
        std::swap(v[b], v[b + 1]);
        ++swaps;
      }
  return (swaps % 2 == 0) ? 1 : -1;
}
}  // namespace

const std::array<Matrix2, 3>& pauli() {
  static const auto t = make_pauli();
  return t;
}

const std::array<Matrix2, 4>& sigma() {
  static const auto s = make_sigma(I);
  return s;
}

const std::array<Matrix2, 4>& sigma_bar() {
  static const auto s = make_sigma(-I);
  return s;
}

int thooft_eta(int a, int mu, int nu) {
  if (a < 1 || a > 3 || mu < 1 || mu > 4 || nu < 1 || nu > 4) {
    throw SpecError("thooft_eta: index out of range");
  }
  if (mu <= 3 && nu <= 3) return epsilon3(a, mu, nu);
  if (nu == 4 && mu <= 3) return a == mu ? 1 : 0;
  if (mu == 4 && nu <= 3) return a == nu ? -1 : 0;
  return 0;  // mu == nu == 4
}

}  // namespace um
