#include "glvkit/ratmat.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace glv {

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionMismatch("ragged initializer for RatMatrix");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::zero(std::size_t rows, std::size_t cols) { return RatMatrix(rows, cols); }

RatMatrix RatMatrix::diagonal(const std::vector<Rational>& d) {
    RatMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

RatMatrix RatMatrix::column(const std::vector<Rational>& v) {
    RatMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

RatMatrix RatMatrix::row_vector(const std::vector<Rational>& v) {
    RatMatrix m(1, v.size());
    for (std::size_t j = 0; j < v.size(); ++j) m(0, j) = v[j];
    return m;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw DimensionMismatch("matrix product " + std::to_string(rows_) + "x" +
                                std::to_string(cols_) + " * " + std::to_string(rhs.rows_) + "x" +
                                std::to_string(rhs.cols_));
    RatMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

RatMatrix RatMatrix::operator+(const RatMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("matrix sum shape");
    RatMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + rhs.data_[i];
    return out;
}

RatMatrix RatMatrix::operator-(const RatMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("matrix difference shape");
    RatMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
    return out;
}

RatMatrix RatMatrix::operator-() const {
    RatMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = -data_[i];
    return out;
}

RatMatrix RatMatrix::scaled(const Rational& s) const {
    RatMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * s;
    return out;
}

void RatMatrix::scale_col(std::size_t j, const Rational& s) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) *= s;
}

void RatMatrix::scale_row(std::size_t i, const Rational& s) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) *= s;
}

void RatMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

std::vector<Rational> RatMatrix::row(std::size_t i) const {
    return std::vector<Rational>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

std::vector<Rational> RatMatrix::col(std::size_t j) const {
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

std::vector<Rational> RatMatrix::mul_vec(const std::vector<Rational>& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector product shape");
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

RatMatrix RatMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
    RatMatrix out(r1 - r0, c1 - c0);
    for (std::size_t i = r0; i < r1; ++i)
        for (std::size_t j = c0; j < c1; ++j) out(i - r0, j - c0) = (*this)(i, j);
    return out;
}

RatMatrix RatMatrix::hstack(const RatMatrix& right) const {
    if (right.empty() && right.rows_ == 0) return *this;
    if (rows_ != right.rows_) throw DimensionMismatch("hstack row count");
    RatMatrix out(rows_, cols_ + right.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < right.cols_; ++j) out(i, cols_ + j) = right(i, j);
    }
    return out;
}

RatMatrix RatMatrix::vstack(const RatMatrix& below) const {
    if (cols_ != below.cols_) throw DimensionMismatch("vstack column count");
    RatMatrix out(rows_ + below.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    for (std::size_t i = 0; i < below.rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(rows_ + i, j) = below(i, j);
    return out;
}

bool RatMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& r) { return r == 0; });
}

bool RatMatrix::is_skew_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if ((*this)(i, j) != -(*this)(j, i)) return false;
    return true;
}

std::string RatMatrix::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < rows_; ++i) {
        out << (i == 0 ? "[" : " ") << "[";
        for (std::size_t j = 0; j < cols_; ++j) out << (j ? ", " : "") << (*this)(i, j);
        out << "]" << (i + 1 == rows_ ? "]" : "\n");
    }
    return out.str();
}

namespace {

// Reduced row echelon form in place; returns the pivot columns. Pivot choice
// is the first nonzero entry per column, keeping everything deterministic.
std::vector<std::size_t> rref_inplace(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        m.scale_row(r, Rational(1) / m(r, c));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

std::size_t rank(const RatMatrix& m) {
    RatMatrix work = m;
    return rref_inplace(work).size();
}

std::vector<Rational> normalize_primitive(std::vector<Rational> v) {
    BigInt l = 1;
    for (const auto& x : v) l = boost::multiprecision::lcm(l, den(x));
    BigInt g = 0;
    for (auto& x : v) {
        x *= l;
        g = boost::multiprecision::gcd(g, num(x));
    }
    if (g == 0) return v; // zero vector
    int lead = 0;
    for (const auto& x : v) {
        if (x != 0) {
            lead = x < 0 ? -1 : 1;
            break;
        }
    }
    Rational scale = Rational(lead) / Rational(g);
    for (auto& x : v) x *= scale;
    return v;
}

std::vector<std::vector<Rational>> right_kernel_basis(const RatMatrix& m) {
    RatMatrix work = m;
    const std::vector<std::size_t> pivots = rref_inplace(work);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    std::vector<std::vector<Rational>> basis;
    for (std::size_t fc = 0; fc < m.cols(); ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Rational> v(m.cols());
        v[fc] = 1;
        for (std::size_t pi = 0; pi < pivots.size(); ++pi) v[pivots[pi]] = -work(pi, fc);
        basis.push_back(normalize_primitive(std::move(v)));
    }
    return basis;
}

std::vector<std::vector<Rational>> left_kernel_basis(const RatMatrix& m) {
    return right_kernel_basis(m.transpose());
}

RatMatrix invert(const RatMatrix& c) {
    if (!c.is_square()) throw DimensionMismatch("invert requires a square matrix");
    const std::size_t n = c.rows();
    RatMatrix work = c.hstack(RatMatrix::identity(n));
    const auto pivots = rref_inplace(work);
    // the identity block always brings the pivot count to n; singularity
    // shows as a pivot escaping into the augmented columns
    if (pivots.size() != n || pivots.back() >= n) throw SingularMatrix("matrix is singular");
    return work.block(0, n, n, 2 * n);
}

std::optional<std::vector<Rational>> solve_linear(const RatMatrix& a, const std::vector<Rational>& b) {
    if (b.size() != a.rows()) throw DimensionMismatch("solve_linear rhs size");
    RatMatrix work = a.hstack(RatMatrix::column(b));
    const auto pivots = rref_inplace(work);
    // pivot in the rhs column means inconsistency
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    std::vector<Rational> x(a.cols());
    for (std::size_t pi = 0; pi < pivots.size(); ++pi) x[pivots[pi]] = work(pi, a.cols());
    return x;
}

RatMatrix skew_canonical_form(std::size_t r, std::size_t n) {
    if (r % 2 != 0 || r > n) throw DomainError("S(r, n-r) needs even r <= n");
    RatMatrix s(n, n);
    for (std::size_t i = 0; i < r; i += 2) {
        s(i, i + 1) = 1;
        s(i + 1, i) = -1;
    }
    return s;
}

std::pair<RatMatrix, std::size_t> skew_congruence_canonicalize(const RatMatrix& k) {
    if (!k.is_skew_symmetric()) throw NotSkewSymmetric("K is not skew-symmetric");
    const std::size_t n = k.rows();
    RatMatrix work = k;
    RatMatrix p = RatMatrix::identity(n);

    // every left row operation is mirrored on the columns, so `work` stays
    // equal to P * K * P^T throughout
    auto swap_sym = [&](std::size_t a, std::size_t b) {
        work.swap_rows(a, b);
        for (std::size_t i = 0; i < n; ++i) std::swap(work(i, a), work(i, b));
        p.swap_rows(a, b);
    };
    auto scale_sym = [&](std::size_t i, const Rational& s) {
        work.scale_row(i, s);
        work.scale_col(i, s);
        p.scale_row(i, s);
    };
    auto add_sym = [&](std::size_t dst, std::size_t src, const Rational& f) {
        for (std::size_t j = 0; j < n; ++j) work(dst, j) += f * work(src, j);
        for (std::size_t i = 0; i < n; ++i) work(i, dst) += f * work(i, src);
        for (std::size_t j = 0; j < n; ++j) p(dst, j) += f * p(src, j);
    };

    std::size_t r = 0;
    while (r + 1 < n) {
        // first nonzero pivot (i, j), i < j, in lexicographic order
        std::size_t pi = n, pj = n;
        for (std::size_t i = r; i < n && pi == n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (work(i, j) != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi == n) break; // trailing block is zero
        swap_sym(r, pi);
        swap_sym(r + 1, pj); // pj > pi >= r, so the first swap left it in place
        // scale the second row of the block so the pivot becomes exactly 1
        scale_sym(r + 1, Rational(1) / work(r, r + 1));
        // clear the two pivot columns below the block
        for (std::size_t t = r + 2; t < n; ++t) {
            Rational a = work(t, r + 1);
            if (a != 0) add_sym(t, r, -a);    // work(r, r+1) = 1
            Rational b = work(t, r);
            if (b != 0) add_sym(t, r + 1, b); // work(r+1, r) = -1
        }
        r += 2;
    }
    return {std::move(p), r};
}

RatMatrix complete_to_full_rank(const RatMatrix& b, std::size_t p) {
    const std::size_t m = b.rows();
    const std::size_t n = b.cols();
    if (n + p > m)
        throw CannotComplete("cannot extend " + std::to_string(m) + "x" + std::to_string(n) +
                             " to rank " + std::to_string(n + p));
    if (rank(b) != n) throw CannotComplete("B is not of maximal rank");
    RatMatrix acc = b;
    RatMatrix bstar(m, p);
    std::size_t chosen = 0;
    for (std::size_t k = 0; k < m && chosen < p; ++k) {
        RatMatrix e(m, 1);
        e(k, 0) = 1;
        RatMatrix trial = acc.hstack(e);
        if (rank(trial) == acc.cols() + 1) {
            acc = std::move(trial);
            bstar(k, chosen) = 1;
            ++chosen;
        }
    }
    // identity columns span everything, so n + p <= m always suffices
    return bstar;
}

RatMatrix complete_rows_to_invertible(const RatMatrix& bottom) {
    const std::size_t n = bottom.cols();
    const std::size_t k = bottom.rows();
    if (k > n || rank(bottom) != k)
        throw CannotComplete("bottom rows are not independent");
    RatMatrix acc = bottom;
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < n && picked.size() < n - k; ++i) {
        RatMatrix e(1, n);
        e(0, i) = 1;
        RatMatrix trial = acc.vstack(e);
        if (rank(trial) == acc.rows() + 1) {
            acc = std::move(trial);
            picked.push_back(i);
        }
    }
    RatMatrix full(n, n);
    for (std::size_t i = 0; i < picked.size(); ++i) full(i, picked[i]) = 1;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) full(n - k + i, j) = bottom(i, j);
    return full;
}

} // namespace glv
