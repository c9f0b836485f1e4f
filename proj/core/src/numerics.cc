// Copyright 2026 The eqpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eqpd/numerics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "eqpd/error.h"

namespace eqpd {
namespace {

using EigenMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMatrix> AsEigen(const ComplexMatrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

ComplexMatrix FromEigen(const Eigen::MatrixXcd& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

void CheckSameShape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kInvalidDimension, "matrix shapes differ");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(entries.begin(), entries.end()) {
  if (entries_.size() != rows * cols) {
    throw Error(ErrorCode::kInvalidDimension,
                "entry count does not match rows x cols");
  }
}

ComplexMatrix ComplexMatrix::Identity(std::size_t n) {
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

std::vector<Complex> ComplexMatrix::Column(std::size_t c) const {
  std::vector<Complex> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::Adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

ComplexMatrix ComplexMatrix::Transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  }
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  CheckSameShape(*this, other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  CheckSameShape(*this, other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& e : entries_) e *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kInvalidDimension, "inner dimensions differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Complex s = a(i, l);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += s * b(l, j);
    }
  }
  return out;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
  a += b;
  return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
  a -= b;
  return a;
}

ComplexMatrix operator*(Complex scale, ComplexMatrix a) {
  a *= scale;
  return a;
}

double FrobeniusNorm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (const Complex& e : a.entries()) sum += std::norm(e);
  return std::sqrt(sum);
}

double MaxAbs(const ComplexMatrix& a) {
  double best = 0.0;
  for (const Complex& e : a.entries()) best = std::max(best, std::abs(e));
  return best;
}

bool AllFinite(const ComplexMatrix& a) {
  return std::all_of(a.entries().begin(), a.entries().end(), [](Complex e) {
    return std::isfinite(e.real()) && std::isfinite(e.imag());
  });
}

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double RandomSource::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Uniform();
}

double RandomSource::Normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // 1 - Uniform() lies in (0, 1], so the log is finite.
  const double radius = std::sqrt(-2.0 * std::log(1.0 - Uniform()));
  const double angle = 2.0 * std::numbers::pi * Uniform();
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

Complex RandomSource::ComplexNormal() {
  const double re = Normal();
  const double im = Normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::size_t RandomSource::UniformIndex(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty index range");
  const std::uint64_t range = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

RandomSource RandomSource::Derive(std::uint64_t stream) const {
  return RandomSource(MixSeed(seed_, stream));
}

ComplexMatrix RandomGaussian(std::size_t rows, std::size_t cols,
                             RandomSource& rng) {
  ComplexMatrix out(rows, cols);
  for (Complex& e : out.entries()) e = rng.ComplexNormal();
  return out;
}

ComplexMatrix RandomUnitary(std::size_t n, RandomSource& rng) {
  if (n == 0) throw Error(ErrorCode::kInvalidDimension, "unitary of size 0");
  const ComplexMatrix g = RandomGaussian(n, n, rng);
  Eigen::MatrixXcd a = AsEigen(g);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    const Complex phase = mag > 0.0 ? d / mag : Complex(1.0);
    q.col(j) *= phase;
  }
  return FromEigen(q);
}

std::vector<std::size_t> RandomPermutationIndices(std::size_t n,
                                                  RandomSource& rng) {
  if (n == 0) throw Error(ErrorCode::kInvalidDimension, "permutation of size 0");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.UniformIndex(i + 1)]);
  }
  return perm;
}

ComplexMatrix PermutationMatrix(std::span<const std::size_t> perm) {
  ComplexMatrix out(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out(i, perm[i]) = 1.0;
  return out;
}

ComplexMatrix RandomPermutation(std::size_t n, RandomSource& rng) {
  const auto perm = RandomPermutationIndices(n, rng);
  return PermutationMatrix(perm);
}

ComplexMatrix SolveHermitianPd(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::kInvalidDimension, "A not square");
  if (b.rows() != n) {
    throw Error(ErrorCode::kInvalidDimension, "A and B row counts differ");
  }
  const double scale = std::max(1.0, MaxAbs(a));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (std::abs(a(i, j) - std::conj(a(j, i))) > 1e-9 * scale) {
        throw Error(ErrorCode::kSingularMatrix, "matrix is not Hermitian");
      }
    }
  }

  // Lower-triangular L with A = L L^H.
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) pivot -= std::norm(l(j, k));
    if (!(pivot > 0.0)) {
      throw Error(ErrorCode::kSingularMatrix,
                  "non-positive pivot at row " + std::to_string(j));
    }
    const double diag = std::sqrt(pivot);
    l(j, j) = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / diag;
    }
  }

  ComplexMatrix x = b;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = x(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
      x(i, c) = s / l(i, i).real();
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = x(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * x(k, c);
      x(i, c) = s / l(i, i).real();
    }
  }
  return x;
}

HermitianEigen EigenHermitian(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kInvalidDimension, "eigendecomposition of non-square");
  }
  Eigen::MatrixXcd m = AsEigen(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNonFinite, "Hermitian eigensolver did not converge");
  }
  HermitianEigen out;
  out.values.assign(solver.eigenvalues().data(),
                    solver.eigenvalues().data() + solver.eigenvalues().size());
  out.vectors = FromEigen(solver.eigenvectors());
  return out;
}

}  // namespace eqpd
