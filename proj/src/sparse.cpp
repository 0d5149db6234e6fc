#include "bates/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bates {

double SparseMatrix::at(int r, int c) const {
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
        if (col[k] == c) return val[k];
    return 0.0;
}

void SparseMatrix::apply_into(const std::vector<double>& v,
                              std::vector<double>& out) const {
    out.resize(n);
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * v[col[k]];
        out[r] = s;
    }
}

std::vector<double> SparseMatrix::apply(const std::vector<double>& v) const {
    std::vector<double> out;
    apply_into(v, out);
    return out;
}

int SparseMatrix::bandwidth() const { return bandwidth(0, n); }

int SparseMatrix::bandwidth(int r0, int r1) const {
    int bw = 0;
    for (int r = r0; r < r1; ++r)
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            bw = std::max(bw, std::abs(col[k] - r));
    return bw;
}

void SparseBuilder::add(int r, int c, double v) {
    rows_[r].emplace_back(c, v);
}

void SparseBuilder::clear_row(int r) { rows_[r].clear(); }

SparseMatrix SparseBuilder::finish(int grid_nx) const {
    SparseMatrix m;
    m.n = n_;
    m.grid_nx = grid_nx;
    m.row_ptr.assign(n_ + 1, 0);
    std::size_t nnz = 0;
    for (const auto& row : rows_) nnz += row.size();
    m.col.reserve(nnz);
    m.val.reserve(nnz);
    for (int r = 0; r < n_; ++r) {
        auto row = rows_[r];
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const int row_start = static_cast<int>(m.col.size());
        for (const auto& [c, v] : row) {
            if (static_cast<int>(m.col.size()) > row_start && m.col.back() == c) {
                m.val.back() += v;   // merge duplicate coordinates
            } else {
                m.col.push_back(c);
                m.val.push_back(v);
            }
        }
        m.row_ptr[r + 1] = static_cast<int>(m.col.size());
    }
    return m;
}

namespace {

std::string node_label(const SparseMatrix& a, int r) {
    std::ostringstream os;
    os << "row " << r;
    if (a.grid_nx > 0) {
        os << " (x-index " << r % a.grid_nx << ", y-index " << r / a.grid_nx << ")";
    }
    return os.str();
}

} // namespace

LUFactors lu_factorize(const SparseMatrix& m) {
    if (m.n <= 0 || static_cast<int>(m.row_ptr.size()) != m.n + 1)
        throw ConfigError("lu_factorize: malformed matrix");

    LUFactors f;
    const int n = m.n;
    f.n_ = n;
    f.a_ = m;
    f.factor_count_ = 1;
    f.solve_count_ = std::make_shared<std::atomic<long>>(0);

    // Diagonal-dominance margin of the input. Informational: callers that
    // know which rows are dynamic equations warn on their own subset.
    double min_margin = 1.0;
    for (int r = 0; r < n; ++r) {
        double diag = 0.0, off = 0.0;
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            if (m.col[k] == r) diag = std::abs(m.val[k]);
            else off += std::abs(m.val[k]);
        }
        if (diag == 0.0) { min_margin = -1.0; break; }
        min_margin = std::min(min_margin, (diag - off) / diag);
    }
    f.min_margin_ = min_margin;

    // Envelopes from the structure. No fill occurs left of the first entry
    // of a row (L) or above the first entry of a column (U).
    std::vector<int> left(n), topc(n);
    for (int r = 0; r < n; ++r) left[r] = r;
    for (int c = 0; c < n; ++c) topc[c] = c;
    for (int r = 0; r < n; ++r)
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            const int c = m.col[k];
            if (c < r) left[r] = std::min(left[r], c);
            else topc[c] = std::min(topc[c], r);
        }
    f.left_ = left;
    f.top_ = topc;

    f.lptr_.assign(n + 1, 0);
    f.uptr_.assign(n + 1, 0);
    for (int r = 0; r < n; ++r) f.lptr_[r + 1] = f.lptr_[r] + (r - left[r]);
    for (int c = 0; c < n; ++c) f.uptr_[c + 1] = f.uptr_[c] + (c - topc[c] + 1);
    f.lval_.assign(f.lptr_[n], 0.0);
    f.uval_.assign(f.uptr_[n], 0.0);

    auto lrow = [&](int r) { return f.lval_.data() + f.lptr_[r]; };       // cols left[r]..r-1
    auto ucol = [&](int c) { return f.uval_.data() + f.uptr_[c]; };       // rows top[c]..c

    // Scatter A into the envelope.
    for (int r = 0; r < n; ++r) {
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            const int c = m.col[k];
            if (c < r) lrow(r)[c - left[r]] = m.val[k];
            else ucol(c)[r - topc[c]] = m.val[k];
        }
    }

    // Row scale for the pivot test.
    std::vector<double> row_scale(n, 0.0);
    for (int r = 0; r < n; ++r)
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
            row_scale[r] = std::max(row_scale[r], std::abs(m.val[k]));

    // Left-looking factorization: at step k finish row k of L and column k of U.
    for (int k = 0; k < n; ++k) {
        double* Lk = lrow(k);
        const int lk = left[k];
        for (int c = lk; c < k; ++c) {
            double s = Lk[c - lk];
            const double* Uc = ucol(c);
            const int tc = topc[c];
            const int j0 = std::max(lk, tc);
            const double* lp = Lk + (j0 - lk);
            const double* up = Uc + (j0 - tc);
            const int len = c - j0;
            for (int t = 0; t < len; ++t) s -= lp[t] * up[t];
            Lk[c - lk] = s / ucol(c)[c - tc];
        }
        double* Uk = ucol(k);
        const int tk = topc[k];
        for (int r = std::max(tk, 1); r <= k; ++r) {
            double s = Uk[r - tk];
            const double* Lr = lrow(r);
            const int lr = left[r];
            const int j0 = std::max(lr, tk);
            const double* lp = Lr + (j0 - lr);
            const double* up = Uk + (j0 - tk);
            const int len = r - j0;
            for (int t = 0; t < len; ++t) s -= lp[t] * up[t];
            Uk[r - tk] = s;
        }
        const double pivot = Uk[k - tk];
        if (std::abs(pivot) < 1e-14 * row_scale[k]) {
            throw NumericError("lu_factorize: zero or near-zero pivot at " +
                               node_label(m, k));
        }
    }
    return f;
}

void LUFactors::substitute(std::vector<double>& b) const {
    const int n = n_;
    // Forward: L has unit diagonal, entries by row.
    for (int r = 0; r < n; ++r) {
        const double* Lr = lval_.data() + lptr_[r];
        const int lr = left_[r];
        double s = b[r];
        const double* bp = b.data() + lr;
        const int len = r - lr;
        for (int t = 0; t < len; ++t) s -= Lr[t] * bp[t];
        b[r] = s;
    }
    // Backward: U stored by column.
    for (int c = n - 1; c >= 0; --c) {
        const double* Uc = uval_.data() + uptr_[c];
        const int tc = top_[c];
        const double xc = b[c] / Uc[c - tc];
        b[c] = xc;
        double* bp = b.data() + tc;
        const int len = c - tc;
        for (int t = 0; t < len; ++t) bp[t] -= Uc[t] * xc;
    }
}

void LUFactors::solve_into(const std::vector<double>& rhs,
                           std::vector<double>& x) const {
    if (static_cast<int>(rhs.size()) != n_)
        throw ConfigError("LUFactors::solve: dimension mismatch");
    x = rhs;
    substitute(x);

    // One step of iterative refinement when the residual is not tiny.
    double bnorm = 0.0;
    for (double v : rhs) bnorm = std::max(bnorm, std::abs(v));
    if (bnorm > 0.0) {
        std::vector<double> res;
        a_.apply_into(x, res);
        double rnorm = 0.0;
        for (int i = 0; i < n_; ++i) {
            res[i] = rhs[i] - res[i];
            rnorm = std::max(rnorm, std::abs(res[i]));
        }
        if (rnorm > 1e-11 * bnorm) {
            substitute(res);
            for (int i = 0; i < n_; ++i) x[i] += res[i];
        }
    }
    if (solve_count_) solve_count_->fetch_add(1, std::memory_order_relaxed);
}

std::vector<double> LUFactors::solve(const std::vector<double>& rhs) const {
    std::vector<double> x;
    solve_into(rhs, x);
    return x;
}

} // namespace bates
