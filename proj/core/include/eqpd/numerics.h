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

#ifndef EQPD_NUMERICS_H_
#define EQPD_NUMERICS_H_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <new>
#include <random>
#include <span>
#include <vector>

namespace eqpd {

using Complex = std::complex<double>;

// Storage is 64-byte aligned so vectorized kernels take the same path (and
// round the same way) regardless of where the buffer lands on the heap.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), kAlignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

// Dense complex matrix, row-major: entry (r, c) lives at r * cols + c.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols,
                std::vector<Complex> entries);

  static ComplexMatrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<Complex> entries() { return entries_; }
  std::span<const Complex> entries() const { return entries_; }
  Complex* data() { return entries_.data(); }
  const Complex* data() const { return entries_.data(); }

  // Copy of column c as a contiguous vector.
  std::vector<Complex> Column(std::size_t c) const;

  ComplexMatrix Adjoint() const;
  ComplexMatrix Transpose() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ComplexBuffer entries_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix a);

double FrobeniusNorm(const ComplexMatrix& a);
// Largest entry modulus; 0 for an empty matrix.
double MaxAbs(const ComplexMatrix& a);
bool AllFinite(const ComplexMatrix& a);

// Deterministic random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniform doubles take the top 53 bits of one draw; normals use
// the Box-Muller transform on pairs of uniforms. No std::*_distribution is
// used, so streams are identical across standard library implementations.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1).
  double Uniform();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);
  double Normal();
  // Circularly-symmetric complex Gaussian with unit variance.
  Complex ComplexNormal();
  // Uniform integer in [0, n), rejection-sampled so it is unbiased.
  std::size_t UniformIndex(std::size_t n);

  // Independent child stream keyed by `stream`; does not advance *this.
  RandomSource Derive(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// SplitMix64 finalizer; used to derive well-separated seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

// Matrix of i.i.d. CN(0, 1) entries.
ComplexMatrix RandomGaussian(std::size_t rows, std::size_t cols,
                             RandomSource& rng);

// Haar-distributed n x n unitary: QR of a complex Gaussian matrix with the
// phases of Q fixed so that R has a positive real diagonal.
ComplexMatrix RandomUnitary(std::size_t n, RandomSource& rng);

// Uniform n x n permutation matrix (Fisher-Yates). Entry (i, perm[i]) is 1.
ComplexMatrix RandomPermutation(std::size_t n, RandomSource& rng);
std::vector<std::size_t> RandomPermutationIndices(std::size_t n,
                                                  RandomSource& rng);
ComplexMatrix PermutationMatrix(std::span<const std::size_t> perm);

// Solves A X = B for Hermitian positive definite A by Cholesky factorization.
// Throws kSingularMatrix if A is not Hermitian (beyond 1e-9, scaled by the
// largest entry) or a pivot is not positive.
ComplexMatrix SolveHermitianPd(const ComplexMatrix& a, const ComplexMatrix& b);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are orthonormal eigenvectors
};

// Eigendecomposition of a Hermitian matrix (only the lower triangle is read).
HermitianEigen EigenHermitian(const ComplexMatrix& a);

}  // namespace eqpd

#endif  // EQPD_NUMERICS_H_
