#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace wshsa {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::uint64_t next_prime(std::uint64_t n) {
    std::uint64_t p = n + 1;
    while (!is_prime(p)) ++p;
    return p;
}

/// Arithmetic context for the prime field F_q.
class Fp {
public:
    explicit Fp(std::uint64_t q) : q_(q) {
        if (!is_prime(q)) throw std::invalid_argument("modulus must be prime: " + std::to_string(q));
    }

    std::uint64_t q() const { return q_; }
    std::uint64_t reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(q_);
        return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
    }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % q_; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + q_ - b % q_) % q_; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % q_);
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1 % q_;
        a %= q_;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    std::uint64_t inv(std::uint64_t a) const {
        if (a % q_ == 0) throw std::domain_error("inverse of zero");
        return pow(a, q_ - 2);
    }

private:
    std::uint64_t q_;
};

/// Dense row-major matrix over F_q. Value type; all operations are pure.
struct Mat {
    std::uint64_t q = 2;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint64_t> a;

    Mat() = default;
    Mat(std::uint64_t q_, std::size_t r, std::size_t c)
        : q(q_), rows(r), cols(c), a(r * c, 0) {}

    std::uint64_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    void set(std::size_t r, std::size_t c, std::int64_t v) { at(r, c) = Fp(q).reduce(v); }

    bool operator==(const Mat&) const = default;

    bool is_zero() const {
        for (auto v : a)
            if (v) return false;
        return true;
    }

    Mat transposed() const {
        Mat t(q, cols, rows);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    friend Mat operator+(const Mat& x, const Mat& y) {
        if (x.q != y.q || x.rows != y.rows || x.cols != y.cols)
            throw std::invalid_argument("matrix shape/modulus mismatch in +");
        Mat out(x.q, x.rows, x.cols);
        for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = (x.a[i] + y.a[i]) % x.q;
        return out;
    }

    friend Mat operator-(const Mat& x, const Mat& y) {
        if (x.q != y.q || x.rows != y.rows || x.cols != y.cols)
            throw std::invalid_argument("matrix shape/modulus mismatch in -");
        Mat out(x.q, x.rows, x.cols);
        for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = (x.a[i] + x.q - y.a[i]) % x.q;
        return out;
    }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.q != y.q || x.cols != y.rows)
            throw std::invalid_argument("matrix shape/modulus mismatch in *");
        Fp f(x.q);
        Mat out(x.q, x.rows, y.cols);
        for (std::size_t r = 0; r < x.rows; ++r)
            for (std::size_t k = 0; k < x.cols; ++k) {
                std::uint64_t v = x.at(r, k);
                if (!v) continue;
                for (std::size_t c = 0; c < y.cols; ++c)
                    out.at(r, c) = f.add(out.at(r, c), f.mul(v, y.at(k, c)));
            }
        return out;
    }

    Mat negated() const {
        Mat out(q, rows, cols);
        for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = a[i] == 0 ? 0 : q - a[i];
        return out;
    }
};

inline Mat identity(std::uint64_t q, std::size_t n) {
    Mat m(q, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

/// Stack matrices vertically (shared column count and modulus).
inline Mat vstack(const std::vector<Mat>& parts, std::uint64_t q, std::size_t cols) {
    std::size_t rows = 0;
    for (const auto& p : parts) rows += p.rows;
    Mat out(q, rows, cols);
    std::size_t r0 = 0;
    for (const auto& p : parts) {
        if (p.rows == 0) continue;
        if (p.cols != cols || p.q != q) throw std::invalid_argument("vstack shape/modulus mismatch");
        for (std::size_t r = 0; r < p.rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) out.at(r0 + r, c) = p.at(r, c);
        r0 += p.rows;
    }
    return out;
}

/// Exact rank over F_q by Gaussian elimination.
inline std::size_t rank(Mat m) {
    Fp f(m.q);
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t piv = r;
        while (piv < m.rows && m.at(piv, c) == 0) ++piv;
        if (piv == m.rows) continue;
        for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.a[r * m.cols + j], m.a[piv * m.cols + j]);
        std::uint64_t inv = f.inv(m.at(r, c));
        for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) = f.mul(m.at(r, j), inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            std::uint64_t factor = m.at(i, c);
            for (std::size_t j = c; j < m.cols; ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(r, j)));
        }
        ++r;
    }
    return r;
}

/// Basis of the right nullspace as columns; m * basis = 0 exactly.
inline Mat solve_nullspace(const Mat& m) {
    Fp f(m.q);
    Mat red = m;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < red.cols && r < red.rows; ++c) {
        std::size_t piv = r;
        while (piv < red.rows && red.at(piv, c) == 0) ++piv;
        if (piv == red.rows) continue;
        for (std::size_t j = 0; j < red.cols; ++j)
            std::swap(red.a[r * red.cols + j], red.a[piv * red.cols + j]);
        std::uint64_t inv = f.inv(red.at(r, c));
        for (std::size_t j = 0; j < red.cols; ++j) red.at(r, j) = f.mul(red.at(r, j), inv);
        for (std::size_t i = 0; i < red.rows; ++i) {
            if (i == r || red.at(i, c) == 0) continue;
            std::uint64_t factor = red.at(i, c);
            for (std::size_t j = 0; j < red.cols; ++j)
                red.at(i, j) = f.sub(red.at(i, j), f.mul(factor, red.at(r, j)));
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<std::size_t> free_cols;
    {
        std::size_t pi = 0;
        for (std::size_t c = 0; c < red.cols; ++c) {
            if (pi < pivot_col.size() && pivot_col[pi] == c) {
                ++pi;
            } else {
                free_cols.push_back(c);
            }
        }
    }
    Mat basis(m.q, m.cols, free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        std::size_t fc = free_cols[k];
        basis.at(fc, k) = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            basis.at(pivot_col[i], k) = f.neg(red.at(i, fc));
    }
    return basis;
}

/// Vandermonde block: entry (r, c) = points[c]^r. Distinct points make every
/// square submatrix of full point count invertible.
inline Mat vandermonde(const std::vector<std::uint64_t>& points, std::size_t rows,
                       std::size_t cols, std::uint64_t q) {
    Fp f(q);
    if (points.size() != cols) throw std::invalid_argument("need one point per column");
    if (q <= points.size()) throw std::invalid_argument("field too small for distinct points");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] % q == points[j] % q)
                throw std::invalid_argument("vandermonde points must be distinct");
    Mat m(q, rows, cols);
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r) m.at(r, c) = f.pow(points[c], r);
    return m;
}

}  // namespace wshsa
