#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace iifem {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Square matrix in compressed row storage with sorted column indices.
class CsrMatrix {
public:
    CsrMatrix() = default;

    /// Duplicates are summed. The result does not depend on triplet order
    /// beyond the summation order of duplicates, which follows input order.
    static CsrMatrix from_triplets(int n, std::vector<Triplet> triplets);

    int rows() const { return n_; }
    int nnz() const { return static_cast<int>(values_.size()); }
    int row_nnz(int r) const { return row_ptr_[r + 1] - row_ptr_[r]; }

    /// Zero when (r, c) is not stored.
    double at(int r, int c) const;
    double diagonal(int r) const { return at(r, r); }

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;

    /// Row-major dense copy, for small instances and tests.
    std::vector<double> to_dense() const;

    std::span<const int> row_ptr() const { return row_ptr_; }
    std::span<const int> cols() const { return cols_; }
    std::span<const double> values() const { return values_; }

    /// "i j value" per stored entry.
    void dump(std::ostream& os) const;

private:
    int n_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> cols_;
    std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace iifem
