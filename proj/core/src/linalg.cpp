#include "banditmt/linalg.hpp"

#include <algorithm>

#include <cmath>
#include <stdexcept>
#include <string>

#include "banditmt/error.hpp"

namespace banditmt::linalg {

namespace {

void require_dim(std::size_t expected, std::size_t got, const char *what) {
    if (expected != got) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                    std::to_string(expected) + ", got " + std::to_string(got) + ")");
    }
}

} // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    require_dim(a.size(), b.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

SymMatrix::SymMatrix(std::size_t dim, double diagonal) : dim_(dim), data_(dim * dim, 0.0) {
    for (std::size_t i = 0; i < dim; ++i) {
        data_[i * dim + i] = diagonal;
    }
}

SymMatrix SymMatrix::from_rows(std::size_t dim, std::vector<double> data) {
    if (data.size() != dim * dim) {
        throw std::invalid_argument("SymMatrix: expected " + std::to_string(dim * dim) + " entries");
    }
    SymMatrix m;
    m.dim_ = dim;
    m.data_ = std::move(data);
    if (m.asymmetry() > 1e-9) {
        throw std::invalid_argument("SymMatrix: input is not symmetric");
    }
    return m;
}

Vector SymMatrix::multiply(std::span<const double> x) const {
    require_dim(dim_, x.size(), "SymMatrix::multiply");
    Vector out(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        out[i] = dot(row(i), x);
    }
    return out;
}

double SymMatrix::asymmetry() const noexcept {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            worst = std::max(worst, std::abs(data_[i * dim_ + j] - data_[j * dim_ + i]));
        }
    }
    return worst;
}

void rank1_inverse_update(SymMatrix &a_inv, std::span<const double> x) {
    const std::size_t d = a_inv.dim();
    require_dim(d, x.size(), "rank1_inverse_update");
    const Vector u = a_inv.multiply(x);
    const double denom = 1.0 + dot(x, u);
    if (!(denom > 1e-12)) {
        throw StateError("Sherman-Morrison denominator " + std::to_string(denom) +
                         " <= 1e-12; inverse is not positive definite");
    }
    auto &m = a_inv.data_;
    for (std::size_t i = 0; i < d; ++i) {
        const double ui = u[i] / denom;
        for (std::size_t j = i; j < d; ++j) {
            m[i * d + j] -= ui * u[j];
        }
    }
    // mirror the upper triangle in tiles to keep the strided writes cache-local
    constexpr std::size_t tile = 32;
    for (std::size_t bi = 0; bi < d; bi += tile) {
        for (std::size_t bj = bi; bj < d; bj += tile) {
            const std::size_t ei = std::min(d, bi + tile), ej = std::min(d, bj + tile);
            for (std::size_t i = bi; i < ei; ++i) {
                for (std::size_t j = std::max(i + 1, bj); j < ej; ++j) {
                    m[j * d + i] = m[i * d + j];
                }
            }
        }
    }
}

SymMatrix sm_rank1_update(SymMatrix a_inv, std::span<const double> x) {
    rank1_inverse_update(a_inv, x);
    return a_inv;
}

double quad_form(const SymMatrix &a, std::span<const double> x) {
    require_dim(a.dim(), x.size(), "quad_form");
    double q = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        q += x[i] * dot(a.row(i), x);
    }
    if (q < 0.0) {
        // Allow cancellation noise relative to the magnitude of the terms.
        const double scale = dot(x, x) * (a.dim() > 0 ? std::abs(a(0, 0)) + 1.0 : 1.0);
        if (q < -1e-12 * scale) {
            throw StateError("negative quadratic form " + std::to_string(q) +
                             "; matrix is not positive semidefinite");
        }
        q = 0.0;
    }
    return q;
}

} // namespace banditmt::linalg
