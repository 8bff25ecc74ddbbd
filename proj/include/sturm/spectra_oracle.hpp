#ifndef STURM_SPECTRA_ORACLE_HPP
#define STURM_SPECTRA_ORACLE_HPP

// Brute-force reference count: central-difference discretisation of
// -d^2/dx^2 - lambda^2 V on m interior nodes and the number of negative
// eigenvalues by Sylvester inertia of the LDL^T factorisation.

#include <cstdint>
#include <vector>

#include "sturm/error.hpp"
#include "sturm/potential.hpp"

namespace sturm {

struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;
    double h = 0.0;
    std::int64_t m = 0;
};

class ZeroPivot : public Error {
public:
    using Error::Error;
};

/// diag[i] = 2/h^2 - lambda^2 V(a + (i+1) h), off[i] = -1/h^2, h = (b-a)/(m+1).
inline Tridiag assemble(const Potential& p, double lambda, std::int64_t m) {
    if (m < 1) throw std::invalid_argument("assemble requires m >= 1");
    Tridiag t;
    t.m = m;
    t.h = (p.b() - p.a()) / static_cast<double>(m + 1);
    const double ih2 = 1.0 / (t.h * t.h);
    const double l2 = lambda * lambda;
    t.diag.resize(m);
    t.off.assign(m - 1, -ih2);
    for (std::int64_t i = 0; i < m; ++i)
        t.diag[i] = 2.0 * ih2 - l2 * p.value(p.a() + static_cast<double>(i + 1) * t.h);
    return t;
}

/// Number of negative pivots of d_1 = diag[0], d_{i+1} = diag[i+1] - off[i]^2 / d_i.
inline std::int64_t count_by_inertia(const Tridiag& t) {
    if (t.diag.empty()) return 0;
    if (t.off.size() + 1 != t.diag.size()) throw std::invalid_argument("tridiagonal shape mismatch");
    std::int64_t negative = 0;
    double d = t.diag[0];
    for (std::size_t i = 0;; ++i) {
        if (d == 0.0) throw ZeroPivot("zero pivot at row " + std::to_string(i));
        if (d < 0.0) ++negative;
        if (i + 1 == t.diag.size()) break;
        d = t.diag[i + 1] - t.off[i] * t.off[i] / d;
    }
    return negative;
}

/// Oracle N(lambda) on an m-point mesh; a zero pivot is retried once at lambda (1 + 1e-12).
inline std::int64_t oracle_count(const Potential& p, double lambda, std::int64_t m = 20000) {
    try {
        return count_by_inertia(assemble(p, lambda, m));
    } catch (const ZeroPivot&) {
        return count_by_inertia(assemble(p, lambda * (1.0 + 1e-12), m));
    }
}

} // namespace sturm

#endif // STURM_SPECTRA_ORACLE_HPP
