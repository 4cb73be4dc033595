#include "nlfb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlfb {
namespace {

// Replacement magnitude for a vanishing pivot: small enough not to perturb a
// well-conditioned solve, large enough to keep 1/pivot finite.
constexpr double kPivotFloor = 1e-280;

double regularize(double pivot, bool& flag) {
  if (std::fabs(pivot) >= kPivotFloor) return pivot;
  flag = true;
  return pivot >= 0.0 ? kPivotFloor : -kPivotFloor;
}

}  // namespace

BandedLU::BandedLU(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_(ldab_ * n, 0.0), piv_(n, 0) {
  if (n == 0) throw std::invalid_argument("BandedLU: empty matrix");
}

void BandedLU::factor() {
  if (factored_) throw std::logic_error("BandedLU: already factored");
  factored_ = true;
  const std::size_t kv = kl_ + ku_;  // rows of superdiagonal storage incl. fill-in
  std::size_t ju = 0;  // rightmost column touched so far (grows with pivot fill-in)
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t km = std::min(kl_, n_ - 1 - j);  // subdiagonal rows in column j

    // Partial pivot among rows j .. j+km of column j.
    std::size_t p = 0;
    double best = std::fabs(ab_[j * ldab_ + kv]);
    for (std::size_t i = 1; i <= km; ++i) {
      const double v = std::fabs(ab_[j * ldab_ + kv + i]);
      if (v > best) { best = v; p = i; }
    }
    piv_[j] = j + p;

    ju = std::max(ju, std::min(j + p + ku_, n_ - 1));
    if (p != 0) {
      for (std::size_t c = j; c <= ju; ++c) {
        std::swap(ab_[c * ldab_ + kv + j - c], ab_[c * ldab_ + kv + j + p - c]);
      }
    }

    double& pivot = ab_[j * ldab_ + kv];
    pivot = regularize(pivot, near_singular_);
    for (std::size_t i = 1; i <= km; ++i) {
      ab_[j * ldab_ + kv + i] /= pivot;
    }
    for (std::size_t c = j + 1; c <= ju && c < n_; ++c) {
      const double ajc = ab_[c * ldab_ + kv + j - c];
      if (ajc == 0.0) continue;
      for (std::size_t i = 1; i <= km; ++i) {
        ab_[c * ldab_ + kv + j + i - c] -= ab_[j * ldab_ + kv + i] * ajc;
      }
    }
  }
}

void BandedLU::solve(std::span<double> b) const {
  if (!factored_) throw std::logic_error("BandedLU: factor() before solve()");
  if (b.size() != n_) throw std::invalid_argument("BandedLU: right-hand side size mismatch");
  const std::size_t kv = kl_ + ku_;

  // Forward: apply interchanges and L (unit lower, multipliers in the band).
  for (std::size_t j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    const std::size_t km = std::min(kl_, n_ - 1 - j);
    for (std::size_t i = 1; i <= km; ++i) {
      b[j + i] -= ab_[j * ldab_ + kv + i] * b[j];
    }
  }
  // Back substitution with U (bandwidth up to kl+ku above the diagonal).
  for (std::size_t jj = n_; jj-- > 0;) {
    const std::size_t reach = std::min(jj, kv);
    double x = b[jj] / ab_[jj * ldab_ + kv];
    b[jj] = x;
    for (std::size_t i = 1; i <= reach; ++i) {
      b[jj - i] -= ab_[jj * ldab_ + kv - i] * x;
    }
  }
}

DenseLU::DenseLU(std::size_t n) : n_(n), a_(n * n, 0.0), piv_(n, 0) {
  if (n == 0) throw std::invalid_argument("DenseLU: empty matrix");
}

void DenseLU::factor() {
  if (factored_) throw std::logic_error("DenseLU: already factored");
  factored_ = true;
  for (std::size_t j = 0; j < n_; ++j) {
    std::size_t p = j;
    double best = std::fabs(a_[j * n_ + j]);
    for (std::size_t i = j + 1; i < n_; ++i) {
      const double v = std::fabs(a_[i * n_ + j]);
      if (v > best) { best = v; p = i; }
    }
    piv_[j] = p;
    if (p != j) {
      for (std::size_t c = 0; c < n_; ++c) std::swap(a_[j * n_ + c], a_[p * n_ + c]);
    }
    double& pivot = a_[j * n_ + j];
    pivot = regularize(pivot, near_singular_);
    for (std::size_t i = j + 1; i < n_; ++i) {
      const double m = a_[i * n_ + j] / pivot;
      a_[i * n_ + j] = m;
      if (m == 0.0) continue;
      for (std::size_t c = j + 1; c < n_; ++c) {
        a_[i * n_ + c] -= m * a_[j * n_ + c];
      }
    }
  }
}

void DenseLU::solve(std::span<double> b) const {
  if (!factored_) throw std::logic_error("DenseLU: factor() before solve()");
  if (b.size() != n_) throw std::invalid_argument("DenseLU: right-hand side size mismatch");
  // factor() swaps whole rows, multipliers included, so the permutation must
  // be applied in full before the (final) L is used. The banded variant
  // swaps only the trailing columns and interleaves instead.
  for (std::size_t j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
  }
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t i = j + 1; i < n_; ++i) b[i] -= a_[i * n_ + j] * b[j];
  }
  for (std::size_t jj = n_; jj-- > 0;) {
    double x = b[jj];
    for (std::size_t c = jj + 1; c < n_; ++c) x -= a_[jj * n_ + c] * b[c];
    b[jj] = x / a_[jj * n_ + jj];
  }
}

}  // namespace nlfb
