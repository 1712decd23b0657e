#include "eigenfit/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

namespace eigenfit {

void ProblemSpec::validate() const {
    if (a.rows() != a.cols()) {
        throw InvalidSpecError("ProblemSpec: matrix is not square");
    }
    if (lambdas.empty()) {
        throw InvalidSpecError("ProblemSpec: no target eigenvalues given");
    }
    if (k() > n()) {
        throw InvalidSpecError("ProblemSpec: more targets than matrix dimension");
    }
    check_finite(a, "ProblemSpec matrix");
    for (const Complex& l : lambdas) {
        if (!std::isfinite(l.real()) || !std::isfinite(l.imag())) {
            throw InvalidSpecError("ProblemSpec: non-finite target eigenvalue");
        }
    }
}

GammaVector GammaVector::zero(int k) {
    GammaVector g;
    g.k = k;
    g.first_diag.assign(k > 1 ? k - 1 : 0, 0.0);
    int upper_count = 0;
    for (int j = 2; j <= k - 1; ++j) upper_count += k - j;
    g.upper.assign(upper_count, Complex(0.0, 0.0));
    return g;
}

int GammaVector::entry_count() const { return k * (k - 1) / 2; }

int GammaVector::dof() const { return (k - 1) * (k - 1); }

int GammaVector::upper_index(int i, int j) const {
    // j-major layout: all i for j=2, then j=3, ...
    int base = 0;
    for (int jj = 2; jj < j; ++jj) base += k - jj;
    return base + (i - 1);
}

Complex GammaVector::at(int i, int j) const {
    if (j < 1 || i < 1 || i + j > k) {
        throw InvalidSpecError("GammaVector: index out of range");
    }
    if (j == 1) return Complex(first_diag[i - 1], 0.0);
    return upper[upper_index(i, j)];
}

void GammaVector::validate() const {
    if (k < 1) throw InvalidSpecError("GammaVector: order must be at least 1");
    if (static_cast<int>(first_diag.size()) != std::max(k - 1, 0)) {
        throw InvalidSpecError("GammaVector: first_diag size mismatch");
    }
    int upper_count = 0;
    for (int j = 2; j <= k - 1; ++j) upper_count += k - j;
    if (static_cast<int>(upper.size()) != upper_count) {
        throw InvalidSpecError("GammaVector: upper size mismatch");
    }
    for (double v : first_diag) {
        if (!std::isfinite(v)) throw InvalidSpecError("GammaVector: non-finite entry");
    }
    for (const Complex& v : upper) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw InvalidSpecError("GammaVector: non-finite entry");
        }
    }
}

int flat_dof(int k) { return (k - 1) * (k - 1); }

RealVector flatten(const GammaVector& g) {
    g.validate();
    RealVector out(g.dof());
    int pos = 0;
    for (double v : g.first_diag) out(pos++) = v;
    for (const Complex& v : g.upper) {
        out(pos++) = v.real();
        out(pos++) = v.imag();
    }
    return out;
}

GammaVector unflatten(int k, const RealVector& values) {
    if (values.size() != flat_dof(k)) {
        throw InvalidSpecError("unflatten: coordinate count mismatch");
    }
    GammaVector g = GammaVector::zero(k);
    int pos = 0;
    for (int i = 0; i < k - 1; ++i) g.first_diag[i] = values(pos++);
    for (auto& v : g.upper) {
        double re = values(pos++);
        double im = values(pos++);
        v = Complex(re, im);
    }
    return g;
}

int kappa(int n, int k) {
    if (k < 1 || k > n) {
        throw InvalidSpecError("kappa: need 1 <= k <= n");
    }
    return n * k - (k - 1);
}

namespace {

ComplexMatrix build_block_matrix(const ComplexMatrix& a,
                                 const std::vector<Complex>& lambdas,
                                 const GammaVector& gamma) {
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(lambdas.size());
    ComplexMatrix q = ComplexMatrix::Zero(n * m, n * m);
    for (int i = 0; i < m; ++i) {
        q.block(i * n, i * n, n, n) = a;
        q.block(i * n, i * n, n, n).diagonal().array() -= lambdas[i];
        for (int j = 1; i + j < m; ++j) {
            const Complex c = gamma.at(i + 1, j);
            q.block(i * n, (i + j) * n, n, n).diagonal().array() += c;
        }
    }
    return q;
}

}  // namespace

ComplexMatrix build_q(const ProblemSpec& spec, const GammaVector& gamma) {
    spec.validate();
    gamma.validate();
    if (gamma.k != spec.k()) {
        throw InvalidSpecError("build_q: gamma order does not match target count");
    }
    return build_block_matrix(spec.a, spec.lambdas, gamma);
}

ComplexMatrix build_sub_q(const ProblemSpec& spec,
                          const std::vector<int>& indices,
                          const GammaVector& gamma_prefix) {
    spec.validate();
    gamma_prefix.validate();
    const int m = static_cast<int>(indices.size());
    if (m < 1 || m > spec.k()) {
        throw InvalidSpecError("build_sub_q: tuple length out of range");
    }
    if (gamma_prefix.k != m) {
        throw InvalidSpecError("build_sub_q: gamma order does not match tuple length");
    }
    std::unordered_set<int> seen;
    std::vector<Complex> sub_lambdas;
    sub_lambdas.reserve(m);
    for (int idx : indices) {
        if (idx < 0 || idx >= spec.k()) {
            throw InvalidSpecError("build_sub_q: position out of range");
        }
        if (!seen.insert(idx).second) {
            throw InvalidSpecError("build_sub_q: positions must be distinct");
        }
        sub_lambdas.push_back(spec.lambdas[idx]);
    }
    return build_block_matrix(spec.a, sub_lambdas, gamma_prefix);
}

GammaVector gamma_prefix(const GammaVector& g, int m) {
    g.validate();
    if (m < 1 || m > g.k) {
        throw InvalidSpecError("gamma_prefix: order out of range");
    }
    GammaVector out = GammaVector::zero(m);
    for (int i = 1; i <= m - 1; ++i) out.first_diag[i - 1] = g.first_diag[i - 1];
    for (int j = 2; j <= m - 1; ++j) {
        for (int i = 1; i + j <= m; ++i) {
            out.upper[out.upper_index(i, j)] = g.upper[g.upper_index(i, j)];
        }
    }
    return out;
}

}  // namespace eigenfit
