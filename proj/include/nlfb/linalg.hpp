#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nlfb {

/// LU factorization with partial pivoting of a banded matrix with kl
/// subdiagonals and ku superdiagonals. Storage is the standard band layout:
/// column j holds the entries A(i,j), max(0,j-ku-kl) <= i <= min(n-1,j+kl),
/// at offset kl+ku+i-j; the top kl slots per column are fill-in workspace.
/// Near-singular pivots are replaced by a tiny signed value so shifted
/// solves stay finite (inverse iteration normalizes the blow-up away).
class BandedLU {
 public:
  BandedLU(std::size_t n, std::size_t kl, std::size_t ku);

  /// Assembly access; (i, j) must satisfy -ku <= i - j <= kl.
  double& at(std::size_t i, std::size_t j) {
    return ab_[j * ldab_ + (kl_ + ku_ + i - j)];
  }

  void factor();
  /// Solves A x = b in place. Requires factor() first.
  void solve(std::span<double> b) const;

  /// True when a pivot had to be regularized (matrix singular to working
  /// precision at that step).
  bool near_singular() const { return near_singular_; }

 private:
  std::size_t n_, kl_, ku_, ldab_;
  std::vector<double> ab_;
  std::vector<std::size_t> piv_;
  bool factored_ = false;
  bool near_singular_ = false;
};

/// Dense LU with partial pivoting (row-major), for small systems and as the
/// fallback when the band covers most of the matrix anyway.
class DenseLU {
 public:
  explicit DenseLU(std::size_t n);

  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

  void factor();
  void solve(std::span<double> b) const;
  bool near_singular() const { return near_singular_; }

 private:
  std::size_t n_;
  std::vector<double> a_;
  std::vector<std::size_t> piv_;
  bool factored_ = false;
  bool near_singular_ = false;
};

}  // namespace nlfb
