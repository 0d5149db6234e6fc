#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <vector>

#include "bates/errors.hpp"

namespace bates {

// Compressed-row sparse matrix. Column indices are strictly increasing
// within each row.
struct SparseMatrix {
    int n = 0;
    std::vector<int> row_ptr;   // size n+1
    std::vector<int> col;
    std::vector<double> val;
    int grid_nx = 0;            // optional: x-fastest grid width, for diagnostics

    double at(int r, int c) const;
    void apply_into(const std::vector<double>& v, std::vector<double>& out) const;
    std::vector<double> apply(const std::vector<double>& v) const;
    int bandwidth() const;
    // Max |col - row| over rows [r0, r1).
    int bandwidth(int r0, int r1) const;
};

// Helper used by the assembly code: accumulates (row, col, value) entries
// and finalizes into CSR with merged duplicates.
class SparseBuilder {
public:
    explicit SparseBuilder(int n) : n_(n), rows_(n) {}
    void add(int r, int c, double v);
    // Drop all existing entries of a row (used to re-impose Dirichlet rows).
    void clear_row(int r);
    SparseMatrix finish(int grid_nx = 0) const;

private:
    int n_;
    std::vector<std::vector<std::pair<int, double>>> rows_;
};

// Banded LU without pivoting, stored in skyline (envelope) form: L by row
// profiles, U by column profiles. Fill stays inside the envelope, so the
// matrix is factorized once and the factors are reused for every time step.
class LUFactors {
public:
    LUFactors() = default;

    std::vector<double> solve(const std::vector<double>& rhs) const;
    void solve_into(const std::vector<double>& rhs, std::vector<double>& x) const;

    int n() const { return n_; }
    int factor_count() const { return factor_count_; }
    long solve_count() const { return solve_count_ ? solve_count_->load() : 0; }
    double min_dominance_margin() const { return min_margin_; }

    friend LUFactors lu_factorize(const SparseMatrix& m);

private:
    void substitute(std::vector<double>& b) const;

    int n_ = 0;
    SparseMatrix a_;                       // kept for the residual check
    std::vector<int> left_, top_;          // row/column envelope starts
    std::vector<std::size_t> lptr_, uptr_;
    std::vector<double> lval_, uval_;
    int factor_count_ = 0;
    double min_margin_ = 0.0;
    std::shared_ptr<std::atomic<long>> solve_count_;
};

LUFactors lu_factorize(const SparseMatrix& m);

inline std::vector<double> solve(const LUFactors& f, const std::vector<double>& rhs) {
    return f.solve(rhs);
}

} // namespace bates
