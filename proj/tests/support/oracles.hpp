#pragma once

// Small reference implementations used to cross-check the library. They are
// built directly on Eigen so they share no code with molspin.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline const cplx I{0.0, 1.0};

inline Mat pauli(char axis) {
  Mat m(2, 2);
  switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -I, I, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Mat eye(int n) { return Mat::Identity(n, n); }

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

// exp(-i 2 pi H t) for hermitian H via its eigenbasis.
inline Mat evolve(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::VectorXcd ph = (es.eigenvalues().cast<cplx>() * cplx(0.0, -2.0 * pi * t)).array().exp().matrix();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// exp(-i A) for hermitian A.
inline Mat exp_minus_i(const Mat& a) { return evolve(a, 1.0 / (2.0 * pi)); }

// Spin matrices built from the ladder-operator matrix elements, m = s..-s.
struct Spin {
  Mat x, y, z, plus, minus;
};

inline Spin spin(double s) {
  const int d = static_cast<int>(std::lround(2 * s)) + 1;
  Spin o;
  o.z = Mat::Zero(d, d);
  o.plus = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = s - k;
    o.z(k, k) = m;
    if (k > 0) o.plus(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  o.minus = o.plus.adjoint();
  o.x = 0.5 * (o.plus + o.minus);
  o.y = cplx(0.0, -0.5) * (o.plus - o.minus);
  return o;
}

// Distance up to a global phase, in the Frobenius norm.
inline double phase_free_distance(const Mat& a, const Mat& b) {
  const cplx tr = (b.adjoint() * a).trace();
  const cplx ph = std::abs(tr) > 0 ? tr / std::abs(tr) : cplx(1.0);
  return (a - ph * b).norm();
}

}  // namespace oracle
