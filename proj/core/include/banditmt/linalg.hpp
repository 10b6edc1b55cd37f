#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace banditmt::linalg {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);

/// Dense symmetric d x d matrix, row-major, both triangles stored.
///
/// Every mutating operation writes entry (i, j) and (j, i) from the same
/// floating-point expression, so symmetry holds exactly, not just within
/// tolerance.
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim, double diagonal = 0.0);

    static SymMatrix identity(std::size_t dim, double scale = 1.0) { return SymMatrix(dim, scale); }

    /// Builds from row-major storage; throws std::invalid_argument if the
    /// data is not square or not symmetric within 1e-9.
    static SymMatrix from_rows(std::size_t dim, std::vector<double> data);

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }
    std::span<const double> data() const noexcept { return data_; }
    std::span<const double> row(std::size_t i) const noexcept {
        return std::span<const double>(data_).subspan(i * dim_, dim_);
    }

    Vector multiply(std::span<const double> x) const;

    /// Largest |A(i,j) - A(j,i)|.
    double asymmetry() const noexcept;

    friend bool operator==(const SymMatrix &, const SymMatrix &) = default;

  private:
    friend void rank1_inverse_update(SymMatrix &, std::span<const double>);
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// Given A^{-1}, replaces it in place by (A + x x^T)^{-1} using the
/// Sherman-Morrison identity:
///   A^{-1} - (A^{-1} x)(A^{-1} x)^T / (1 + x^T A^{-1} x).
/// Throws StateError when the denominator is <= 1e-12, which cannot happen
/// for a positive definite input.
void rank1_inverse_update(SymMatrix &a_inv, std::span<const double> x);

/// Value-returning form of rank1_inverse_update.
SymMatrix sm_rank1_update(SymMatrix a_inv, std::span<const double> x);

/// x^T A x. Throws StateError when the result is negative beyond rounding,
/// which signals that a supposedly PD matrix has been corrupted.
double quad_form(const SymMatrix &a, std::span<const double> x);

} // namespace banditmt::linalg
