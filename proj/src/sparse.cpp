#include "iifem/sparse.hpp"

#include "iifem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace iifem {

CsrMatrix CsrMatrix::from_triplets(int n, std::vector<Triplet> triplets) {
    if (n < 0) throw InvalidArgument("CsrMatrix: negative dimension");
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) throw InvalidArgument("CsrMatrix: index out of range");
    }
    std::stable_sort(triplets.begin(), triplets.end(),
                     [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });

    CsrMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        const int r = triplets[i].row, c = triplets[i].col;
        double v = 0.0;
        for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i) v += triplets[i].value;
        m.cols_.push_back(c);
        m.values_.push_back(v);
        ++m.row_ptr_[r + 1];
    }
    for (int r = 0; r < n; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

double CsrMatrix::at(int r, int c) const {
    const auto first = cols_.begin() + row_ptr_[r];
    const auto last = cols_.begin() + row_ptr_[r + 1];
    const auto it = std::lower_bound(first, last, c);
    return it != last && *it == c ? values_[static_cast<std::size_t>(it - cols_.begin())] : 0.0;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_) {
        throw InvalidArgument("CsrMatrix::multiply: dimension mismatch");
    }
    for (int r = 0; r < n_; ++r) {
        double s = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[cols_[k]];
        y[r] = s;
    }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(n_));
    multiply(x, y);
    return y;
}

std::vector<double> CsrMatrix::to_dense() const {
    std::vector<double> d(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int r = 0; r < n_; ++r) {
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d[static_cast<std::size_t>(r) * n_ + cols_[k]] = values_[k];
    }
    return d;
}

void CsrMatrix::dump(std::ostream& os) const {
    const auto old_precision = os.precision(17);
    for (int r = 0; r < n_; ++r) {
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) os << r << ' ' << cols_[k] << ' ' << values_[k] << '\n';
    }
    os.precision(old_precision);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace iifem
