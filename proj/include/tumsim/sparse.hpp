#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "tumsim/errors.hpp"

namespace tumsim {

// Accumulates (row, col, value) contributions during element loops.
struct TripletBuffer {
    int rows = 0;
    int cols = 0;
    struct Entry {
        int row, col;
        double value;
    };
    std::vector<Entry> entries;

    TripletBuffer(int r, int c) : rows(r), cols(c) {}

    void add(int r, int c, double v) {
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw SolverError("triplet index out of bounds");
        entries.push_back({r, c, v});
    }
};

// Compressed-row matrix. Column indices are strictly increasing within each
// row and duplicates have been summed.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_offsets;  // size rows + 1
    std::vector<int> col_indices;
    std::vector<double> values;

    int nnz() const { return (int)col_indices.size(); }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }

    std::vector<double> multiply(const std::vector<double>& x) const {
        std::vector<double> y(rows, 0.0);
        for (int r = 0; r < rows; ++r) {
            double s = 0.0;
            for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
                s += values[k] * x[col_indices[k]];
            y[r] = s;
        }
        return y;
    }
};

// Sums duplicate contributions. Sorting includes the value so the summation
// order of duplicates is canonical: permuting the triplets yields an
// identical matrix.
inline SparseMatrix finalize(const TripletBuffer& buffer) {
    std::vector<TripletBuffer::Entry> es = buffer.entries;
    std::sort(es.begin(), es.end(), [](const auto& a, const auto& b) {
        if (a.row != b.row) return a.row < b.row;
        if (a.col != b.col) return a.col < b.col;
        return a.value < b.value;
    });

    SparseMatrix m;
    m.rows = buffer.rows;
    m.cols = buffer.cols;
    m.row_offsets.assign(m.rows + 1, 0);

    std::size_t i = 0;
    while (i < es.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < es.size() && es[j].row == es[i].row && es[j].col == es[i].col)
            sum += es[j++].value;
        m.col_indices.push_back(es[i].col);
        m.values.push_back(sum);
        m.row_offsets[es[i].row + 1]++;
        i = j;
    }
    for (int r = 0; r < m.rows; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
    return m;
}

// Sparse LU with partial pivoting (Eigen::SparseLU behind the module
// contract). Guarantees a relative residual <= 1e-10 or raises a
// singular-system error naming the worst-served unknown.
inline std::vector<double> direct_solve(const SparseMatrix& A,
                                        const std::vector<double>& b) {
    if (A.rows != A.cols) throw SolverError("direct_solve: matrix not square");
    if ((int)b.size() != A.rows) throw SolverError("direct_solve: size mismatch");
    const int n = A.rows;
    if (n == 0) return {};

    using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor>;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nnz());
    for (int r = 0; r < n; ++r)
        for (int k = A.row_offsets[r]; k < A.row_offsets[r + 1]; ++k)
            trips.emplace_back(r, A.col_indices[k], A.values[k]);
    SpMat M(n, n);
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.isSymmetric(false);
    lu.analyzePattern(M);
    lu.factorize(M);
    if (lu.info() != Eigen::Success)
        throw SolverError("singular system: " + std::string(lu.lastErrorMessage()));

    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), n);
    Eigen::VectorXd x = lu.solve(rhs);

    double bn = rhs.norm();
    if (bn > 0.0) {
        Eigen::VectorXd res = M * x - rhs;
        for (int sweep = 0; sweep < 4 && res.norm() > 1e-13 * bn; ++sweep) {
            x += lu.solve((-res).eval());
            res = M * x - rhs;
        }
        if (res.norm() > 1e-10 * bn) {
            int worst = 0;
            res.cwiseAbs().maxCoeff(&worst);
            throw SolverError("singular system: near-singular pivot, worst residual at unknown " +
                              std::to_string(worst));
        }
    }

    return std::vector<double>(x.data(), x.data() + n);
}

} // namespace tumsim
