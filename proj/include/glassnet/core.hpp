#pragma once

// Shared primitives: index sets over [n] = {1,...,n} with their binary codes
// and signatures, subset enumeration, and small dense matrix helpers.
//
// Unit indices are 1-based across the public API. Raw state vectors are
// std::vector<double> with unit i stored at [i-1].

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace glassnet {

inline constexpr int kDefaultEnumerationCap = 24;
inline constexpr int kMaxUnits = 60;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exhaustive subset enumeration was requested above the configured cap.
struct EnumerationLimitError : Error { using Error::Error; };

/// A family of index sets does not have the shape its kind requires.
struct FamilyShapeError : Error { using Error::Error; };

/// The network violates the non-vanishing output constraint.
struct ConstraintViolationError : Error { using Error::Error; };

/// A factorization was requested for a set that is not stable.
struct NotStableError : Error { using Error::Error; };

/// Epsilon shrank below 1e-12 without producing a positive factor.
struct EpsilonUnderflowError : Error { using Error::Error; };

/// A theorem's algebraic predicate disagreed with the direct stability
/// recomputation. Indicates a bug in this library, never bad user input.
struct TheoremConsistencyError : Error { using Error::Error; };

/// Heaviside step with theta(0) = 0.
inline int theta(double x) { return x > 0.0 ? 1 : 0; }

using Vec = std::vector<double>;

inline double inf_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double inf_dist(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline bool all_finite(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// ---------------------------------------------------------------------------
// Exact integer arithmetic for the signature-counting formulas
// ---------------------------------------------------------------------------

using Int128 = __int128;

inline std::string to_string(Int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                              : static_cast<unsigned __int128>(v);
    std::string s;
    while (u != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

inline Int128 ipow(Int128 base, int exp) {
    if (exp < 0) throw std::invalid_argument("ipow: negative exponent");
    Int128 r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// ---------------------------------------------------------------------------
// IndexSet
// ---------------------------------------------------------------------------

/// Subset of [n] = {1,...,n}, stored as a bitmask (bit i-1 for unit i).
/// Membership and complement are single word operations.
class IndexSet {
public:
    IndexSet(int n, std::uint64_t bits) : n_(n), bits_(bits) {
        if (n < 1 || n > kMaxUnits)
            throw std::invalid_argument("IndexSet: dimension must be in 1.." +
                                        std::to_string(kMaxUnits));
        if (n < 64 && (bits >> n) != 0)
            throw std::invalid_argument("IndexSet: bits outside 1..n");
    }

    static IndexSet empty(int n) { return IndexSet(n, 0); }

    static IndexSet full(int n) {
        return IndexSet(n, n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
    }

    static IndexSet from_members(int n, const std::vector<int>& members) {
        std::uint64_t bits = 0;
        for (int u : members) {
            if (u < 1 || u > n)
                throw std::invalid_argument("IndexSet: unit " + std::to_string(u) +
                                            " outside 1.." + std::to_string(n));
            bits |= std::uint64_t{1} << (u - 1);
        }
        return IndexSet(n, bits);
    }

    static IndexSet of(int n, std::initializer_list<int> members) {
        return from_members(n, std::vector<int>(members));
    }

    int n() const { return n_; }
    std::uint64_t bits() const { return bits_; }
    int size() const { return std::popcount(bits_); }
    bool is_empty() const { return bits_ == 0; }

    bool contains(int unit) const {
        check_unit(unit);
        return (bits_ >> (unit - 1)) & 1u;
    }

    /// Members in ascending order, 1-based.
    std::vector<int> members() const {
        std::vector<int> m;
        m.reserve(static_cast<std::size_t>(size()));
        for (int u = 1; u <= n_; ++u)
            if ((bits_ >> (u - 1)) & 1u) m.push_back(u);
        return m;
    }

    IndexSet complement() const { return IndexSet(n_, ~bits_ & full(n_).bits_); }

    IndexSet with(int unit) const {
        check_unit(unit);
        return IndexSet(n_, bits_ | (std::uint64_t{1} << (unit - 1)));
    }

    IndexSet without(int unit) const {
        check_unit(unit);
        return IndexSet(n_, bits_ & ~(std::uint64_t{1} << (unit - 1)));
    }

    IndexSet toggled(int unit) const {
        check_unit(unit);
        return IndexSet(n_, bits_ ^ (std::uint64_t{1} << (unit - 1)));
    }

    IndexSet union_with(const IndexSet& b) const { return IndexSet(n_, bits_ | checked(b)); }
    IndexSet intersection(const IndexSet& b) const { return IndexSet(n_, bits_ & checked(b)); }
    IndexSet difference(const IndexSet& b) const { return IndexSet(n_, bits_ & ~checked(b)); }

    bool subset_of(const IndexSet& b) const { return (bits_ & ~checked(b)) == 0; }
    bool proper_subset_of(const IndexSet& b) const {
        return subset_of(b) && bits_ != b.bits_;
    }
    bool disjoint_from(const IndexSet& b) const { return (bits_ & checked(b)) == 0; }

    friend bool operator==(const IndexSet& a, const IndexSet& b) {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }
    friend bool operator!=(const IndexSet& a, const IndexSet& b) { return !(a == b); }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int u : members()) {
            if (!first) s += ",";
            s += std::to_string(u);
            first = false;
        }
        return s + "}";
    }

private:
    void check_unit(int unit) const {
        if (unit < 1 || unit > n_)
            throw std::invalid_argument("IndexSet: unit " + std::to_string(unit) +
                                        " outside 1.." + std::to_string(n_));
    }
    std::uint64_t checked(const IndexSet& b) const {
        if (b.n_ != n_)
            throw std::invalid_argument("IndexSet: mismatched dimensions " +
                                        std::to_string(n_) + " vs " + std::to_string(b.n_));
        return b.bits_;
    }

    int n_;
    std::uint64_t bits_;
};

inline IndexSet complement(const IndexSet& a) { return a.complement(); }

// ---------------------------------------------------------------------------
// BinaryCode and Signature
// ---------------------------------------------------------------------------

/// 0/1 indicator vector of the active units.
struct BinaryCode {
    int n = 0;
    std::vector<int> bits;  // bits[i-1] in {0,1}
};

/// +/-1 vector: +1 for active units, -1 for inactive ones.
struct Signature {
    int n = 0;
    std::vector<int> signs;  // signs[i-1] in {-1,+1}

    int sign(int unit) const { return signs.at(static_cast<std::size_t>(unit - 1)); }
};

inline BinaryCode code(const IndexSet& a) {
    BinaryCode c{a.n(), std::vector<int>(static_cast<std::size_t>(a.n()), 0)};
    for (int u = 1; u <= a.n(); ++u)
        if (a.contains(u)) c.bits[static_cast<std::size_t>(u - 1)] = 1;
    return c;
}

inline Signature signature(const IndexSet& a) {
    Signature s{a.n(), std::vector<int>(static_cast<std::size_t>(a.n()), -1)};
    for (int u = 1; u <= a.n(); ++u)
        if (a.contains(u)) s.signs[static_cast<std::size_t>(u - 1)] = 1;
    return s;
}

inline IndexSet to_index_set(const BinaryCode& c) {
    std::uint64_t bits = 0;
    for (int u = 1; u <= c.n; ++u) {
        int b = c.bits.at(static_cast<std::size_t>(u - 1));
        if (b != 0 && b != 1) throw std::invalid_argument("BinaryCode: bits must be 0/1");
        if (b) bits |= std::uint64_t{1} << (u - 1);
    }
    return IndexSet(c.n, bits);
}

// ---------------------------------------------------------------------------
// Subset enumeration
// ---------------------------------------------------------------------------

/// Range over all 2^n subsets of [n] in ascending bitmask order.
class SubsetRange {
public:
    class iterator {
    public:
        iterator(int n, std::uint64_t mask) : n_(n), mask_(mask) {}
        IndexSet operator*() const { return IndexSet(n_, mask_); }
        iterator& operator++() {
            ++mask_;
            return *this;
        }
        bool operator!=(const iterator& o) const { return mask_ != o.mask_; }

    private:
        int n_;
        std::uint64_t mask_;
    };

    explicit SubsetRange(int n) : n_(n) {}
    iterator begin() const { return iterator(n_, 0); }
    iterator end() const { return iterator(n_, std::uint64_t{1} << n_); }
    std::uint64_t size() const { return std::uint64_t{1} << n_; }

private:
    int n_;
};

inline SubsetRange all_subsets(int n, int cap = kDefaultEnumerationCap) {
    if (n < 1) throw std::invalid_argument("all_subsets: n must be positive");
    if (n > cap)
        throw EnumerationLimitError("enumeration over n=" + std::to_string(n) +
                                    " units exceeds the cap of " + std::to_string(cap) +
                                    " (2^n subsets)");
    return SubsetRange(n);
}

// ---------------------------------------------------------------------------
// Small dense matrices
// ---------------------------------------------------------------------------

/// Row-major dense matrix with 1-based accessors, sized for n <= a few dozen.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative size");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 1; i <= n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        const int r = static_cast<int>(rows.size());
        const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
        Matrix m(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c)
                throw std::invalid_argument("Matrix: ragged rows");
            for (int j = 0; j < c; ++j)
                m(i + 1, j + 1) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[index(i, j)]; }
    double operator()(int i, int j) const { return a_[index(i, j)]; }

    Matrix operator*(const Matrix& b) const {
        if (cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(rows_, b.cols_);
        for (int i = 1; i <= rows_; ++i)
            for (int k = 1; k <= cols_; ++k) {
                const double aik = (*this)(i, k);
                if (aik == 0.0) continue;
                for (int j = 1; j <= b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    Vec operator*(const Vec& v) const {
        if (static_cast<int>(v.size()) != cols_)
            throw std::invalid_argument("Matrix: shape mismatch in matrix-vector product");
        Vec r(static_cast<std::size_t>(rows_), 0.0);
        for (int i = 1; i <= rows_; ++i) {
            double s = 0.0;
            for (int j = 1; j <= cols_; ++j) s += (*this)(i, j) * v[static_cast<std::size_t>(j - 1)];
            r[static_cast<std::size_t>(i - 1)] = s;
        }
        return r;
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    Matrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix: inverse of non-square matrix");
        const int n = rows_;
        Matrix a = *this;
        Matrix inv = identity(n);
        for (int col = 1; col <= n; ++col) {
            int pivot = col;
            for (int r = col + 1; r <= n; ++r)
                if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
            if (std::abs(a(pivot, col)) < 1e-300)
                throw Error("matrix is singular to working precision");
            if (pivot != col) {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            const double d = a(col, col);
            for (int j = 1; j <= n; ++j) {
                a(col, j) /= d;
                inv(col, j) /= d;
            }
            for (int r = 1; r <= n; ++r) {
                if (r == col) continue;
                const double f = a(r, col);
                if (f == 0.0) continue;
                for (int j = 1; j <= n; ++j) {
                    a(r, j) -= f * a(col, j);
                    inv(r, j) -= f * inv(col, j);
                }
            }
        }
        return inv;
    }

    /// Max column absolute sum.
    double one_norm() const {
        double best = 0.0;
        for (int j = 1; j <= cols_; ++j) {
            double s = 0.0;
            for (int i = 1; i <= rows_; ++i) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    double max_abs_diff(const Matrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_)
            throw std::invalid_argument("Matrix: shape mismatch in comparison");
        double m = 0.0;
        for (std::size_t k = 0; k < a_.size(); ++k) m = std::max(m, std::abs(a_[k] - b.a_[k]));
        return m;
    }

    bool all_finite() const {
        return std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); });
    }

    std::vector<std::vector<double>> to_rows() const {
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(rows_));
        for (int i = 1; i <= rows_; ++i) {
            rows[static_cast<std::size_t>(i - 1)].resize(static_cast<std::size_t>(cols_));
            for (int j = 1; j <= cols_; ++j)
                rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = (*this)(i, j);
        }
        return rows;
    }

private:
    std::size_t index(int i, int j) const {
        if (i < 1 || i > rows_ || j < 1 || j > cols_)
            throw std::out_of_range("Matrix: index (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") outside " + std::to_string(rows_) +
                                    "x" + std::to_string(cols_));
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j - 1);
    }

    void swap_rows(int r1, int r2) {
        for (int j = 1; j <= cols_; ++j) std::swap((*this)(r1, j), (*this)(r2, j));
    }

    int rows_, cols_;
    std::vector<double> a_;
};

/// Square matrix of synaptic weights; row i is the postsynaptic unit,
/// column j the presynaptic one. All entries must be finite.
class WeightMatrix {
public:
    explicit WeightMatrix(int n) : m_(n, n) {
        if (n < 1) throw std::invalid_argument("WeightMatrix: dimension must be positive");
    }

    static WeightMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        Matrix m = Matrix::from_rows(rows);
        if (m.rows() != m.cols() || m.rows() < 1)
            throw std::invalid_argument("WeightMatrix: matrix must be square and non-empty");
        if (!m.all_finite()) throw std::invalid_argument("WeightMatrix: entries must be finite");
        WeightMatrix w(m.rows());
        w.m_ = std::move(m);
        return w;
    }

    static WeightMatrix from_matrix(Matrix m) {
        return from_rows(m.to_rows());
    }

    int n() const { return m_.rows(); }
    double& operator()(int i, int j) { return m_(i, j); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Matrix& matrix() const { return m_; }

    friend bool operator==(const WeightMatrix& a, const WeightMatrix& b) {
        return a.n() == b.n() && a.m_.max_abs_diff(b.m_) == 0.0;
    }

private:
    Matrix m_;
};

/// Sum of row entries over the given columns, ascending column order.
inline double block_row_sum(const WeightMatrix& w, int row, const IndexSet& cols) {
    if (cols.n() != w.n()) throw std::invalid_argument("block_row_sum: dimension mismatch");
    double s = 0.0;
    for (int j = 1; j <= w.n(); ++j)
        if (cols.contains(j)) s += w(row, j);
    return s;
}

}  // namespace glassnet
