#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "planar/linalg.hpp"
#include "planar/rational.hpp"

namespace planar {

/// A rational d-dimensional direction (linear subspace) of R^n.
///
/// Stored canonically: the basis is the reduced row echelon form of any
/// spanning set, the Grassmann coordinates are the d x d minors (lexicographic
/// column subsets) scaled to coprime integers with positive leading entry,
/// and for d = n-1 a canonical integer normal vector is kept as well.
/// Equality of slopes is decidable by comparing Grassmann coordinates.
class Slope {
public:
    static Slope from_basis(int n, int d, QMat rows) {
        if (n <= 0 || d <= 0 || d >= n) throw error("Slope: need 0 < d < n");
        if (rows.size() != static_cast<size_t>(d)) throw error("Slope: basis row count != d");
        for (const auto& r : rows)
            if (r.size() != static_cast<size_t>(n)) throw error("Slope: basis row size != n");
        QMat reduced = rows;
        auto pivots = rref(reduced);
        if (pivots.size() != static_cast<size_t>(d)) throw error("Slope: basis not independent");
        return Slope(n, d, std::move(reduced));
    }

    static Slope from_normal(QVec nu) {
        int n = static_cast<int>(nu.size());
        if (n < 2) throw error("Slope: normal needs n >= 2");
        if (is_zero(nu)) throw error("Slope: zero normal");
        QMat m{nu};
        QMat basis = kernel_basis(m, nu.size());
        return from_basis(n, n - 1, std::move(basis));
    }

    /// Direction of a line (d = 1).
    static Slope from_direction(QVec dir) {
        int n = static_cast<int>(dir.size());
        return from_basis(n, 1, QMat{std::move(dir)});
    }

    int n() const { return n_; }
    int d() const { return d_; }
    const QMat& basis() const { return basis_; }
    const QVec& grassmann() const { return grassmann_; }

    /// Canonical integer normal (only for d = n-1).
    const QVec& normal() const {
        if (!normal_.has_value()) throw error("Slope: normal only defined for d = n-1");
        return *normal_;
    }

    bool has_normal() const { return normal_.has_value(); }

    /// Normal rescaled so that its largest-magnitude entry is +-1; ties break
    /// toward the earliest coordinate. The returned index is that coordinate.
    std::pair<int, QVec> chart_normal() const {
        const QVec& nu = normal();
        int best = 0;
        for (int i = 1; i < n_; ++i)
            if (rat_abs(nu[i]) > rat_abs(nu[best])) best = i;
        QVec scaled(nu.size());
        for (size_t i = 0; i < nu.size(); ++i) scaled[i] = nu[i] / rat_abs(nu[best]);
        return {best, scaled};
    }

    bool operator==(const Slope& o) const {
        return n_ == o.n_ && d_ == o.d_ && grassmann_ == o.grassmann_;
    }
    bool operator!=(const Slope& o) const { return !(*this == o); }
    bool operator<(const Slope& o) const {
        if (n_ != o.n_) return n_ < o.n_;
        if (d_ != o.d_) return d_ < o.d_;
        for (size_t i = 0; i < grassmann_.size(); ++i)
            if (grassmann_[i] != o.grassmann_[i]) return grassmann_[i] < o.grassmann_[i];
        return false;
    }

private:
    Slope(int n, int d, QMat reduced) : n_(n), d_(d), basis_(std::move(reduced)) {
        auto subsets = subsets_of_size(n_, d_);
        grassmann_.reserve(subsets.size());
        for (const auto& cols : subsets) grassmann_.push_back(minor_det(basis_, cols));
        grassmann_ = canonical_direction(std::move(grassmann_));
        if (d_ == n_ - 1) {
            QMat k = kernel_basis(basis_, static_cast<size_t>(n_));
            if (k.size() != 1) throw error("Slope: kernel rank unexpected");
            normal_ = canonical_direction(std::move(k[0]));
        }
    }

    int n_, d_;
    QMat basis_;
    QVec grassmann_;
    std::optional<QVec> normal_;
};

/// True when some Grassmann coordinate vanishes, i.e. the slope admits a
/// digitization that misses one of the possible tile types.
inline bool is_degenerate(const Slope& e) {
    for (const auto& g : e.grassmann())
        if (sgn(g) == 0) return true;
    return false;
}

namespace detail {

/// sin^2 of the angle between two nonzero vectors, exactly.
inline Q sin2_between(const QVec& u, const QVec& v) {
    Q uv = dot(u, v), uu = dot(u, u), vv = dot(v, v);
    return Q(1) - uv * uv / (uu * vv);
}

/// Orthogonal projector onto the row space of b.
inline QMat projector(const QMat& b, int n) {
    size_t d = b.size();
    QMat gram(d, QVec(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) gram[i][j] = dot(b[i], b[j]);
    // Invert the Gram matrix by solving against unit vectors.
    QMat inv(d, QVec(d));
    for (size_t k = 0; k < d; ++k) {
        QVec e(d, Q(0));
        e[k] = 1;
        auto col = solve_linear(gram, e);
        if (!col) throw error("projector: singular Gram matrix");
        for (size_t i = 0; i < d; ++i) inv[i][k] = (*col)[i];
    }
    QMat p(n, QVec(n, Q(0)));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            Q acc(0);
            for (size_t i = 0; i < d; ++i)
                for (size_t j = 0; j < d; ++j) acc += b[i][r] * inv[i][j] * b[j][c];
            p[r][c] = acc;
        }
    return p;
}

}  // namespace detail

/// Distance between two equal-dimension slopes: the sine of their largest
/// principal angle (equivalently the Hausdorff distance of their unit-sphere
/// sections). Returned as a rational enclosure of width at most tol.
inline QRange plane_distance(const Slope& e, const Slope& f, const Q& tol = Q(1, 1000000000)) {
    if (e.n() != f.n() || e.d() != f.d()) throw error("plane_distance: dimension mismatch");
    if (e == f) return {Q(0), Q(0)};
    if (e.d() == e.n() - 1) {
        return sqrt_enclosure(detail::sin2_between(e.normal(), f.normal()), tol);
    }
    if (e.d() == 1) {
        return sqrt_enclosure(detail::sin2_between(e.basis()[0], f.basis()[0]), tol);
    }
    // General case: the squared distance is the largest eigenvalue of the
    // pencil (A (I - P_F) A^T, A A^T), found by Sturm bisection on its
    // characteristic polynomial.
    const QMat& a = e.basis();
    int n = e.n(), d = e.d();
    QMat pf = detail::projector(f.basis(), n);
    QMat c(d, QVec(d)), g(d, QVec(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Q cij(0), gij(0);
            for (int r = 0; r < n; ++r) {
                Q proj(0);
                for (int s = 0; s < n; ++s) proj += pf[r][s] * a[j][s];
                cij += a[i][r] * (a[j][r] - proj);
                gij += a[i][r] * a[j][r];
            }
            c[i][j] = cij;
            g[i][j] = gij;
        }
    // p(l) = det(l G - C), interpolated at d+1 points.
    std::vector<Q> xs, ys;
    for (int k = 0; k <= d; ++k) {
        Q x(k);
        QMat m(d, QVec(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m[i][j] = x * g[i][j] - c[i][j];
        xs.push_back(x);
        ys.push_back(det(m));
    }
    QPoly p(d + 1, Q(0));
    for (int k = 0; k <= d; ++k) {
        QPoly term{Q(1)};
        Q denom(1);
        for (int j = 0; j <= d; ++j) {
            if (j == k) continue;
            QPoly next(term.size() + 1, Q(0));
            for (size_t i = 0; i < term.size(); ++i) {
                next[i + 1] += term[i];
                next[i] -= xs[j] * term[i];
            }
            term = std::move(next);
            denom *= xs[k] - xs[j];
        }
        for (size_t i = 0; i < term.size(); ++i) p[i] += ys[k] * term[i] / denom;
    }
    Q tol2 = tol * tol / 4;
    QRange s2 = poly_max_root(p, Q(-1, 2), Q(1), tol2);
    Q lo2 = rat_max(s2.lo, Q(0)), hi2 = rat_min(s2.hi, Q(1));
    return {sqrt_enclosure(lo2, tol / 4).lo, sqrt_enclosure(hi2, tol / 4).hi};
}

// ---------------------------------------------------------------------------
// Enumeration of all rational slopes

/// Streams every rational d-plane of R^n exactly once, in a fixed order of
/// increasing height (the maximum of |numerator| and denominator over the
/// free entries of the reduced-echelon basis; 0 and +-1 have height one).
/// Within one height, pivot column sets advance lexicographically.
class RationalSlopeEnumerator {
public:
    RationalSlopeEnumerator(int n, int d) : n_(n), d_(d) {
        if (n <= 0 || d <= 0 || d >= n) throw error("enumerator: need 0 < d < n");
        pivot_sets_ = subsets_of_size(n, d);
        pivot_idx_ = pivot_sets_.size();  // first refill starts height 1
    }

    Slope next() {
        while (queue_.empty()) refill();
        Slope s = std::move(queue_.front());
        queue_.pop_front();
        return s;
    }

private:
    struct FreeSlot {
        int row, col;
    };

    std::vector<FreeSlot> free_slots(const std::vector<int>& pivots) const {
        std::vector<bool> is_pivot(n_, false);
        for (int c : pivots) is_pivot[c] = true;
        std::vector<FreeSlot> slots;
        for (int r = 0; r < d_; ++r)
            for (int c = pivots[r] + 1; c < n_; ++c)
                if (!is_pivot[c]) slots.push_back({r, c});
        return slots;
    }

    Slope build(const std::vector<int>& pivots, const std::vector<FreeSlot>& slots,
                const std::vector<Q>& vals) const {
        QMat rows(d_, QVec(n_, Q(0)));
        for (int r = 0; r < d_; ++r) rows[r][pivots[r]] = 1;
        for (size_t i = 0; i < slots.size(); ++i) rows[slots[i].row][slots[i].col] = vals[i];
        return Slope::from_basis(n_, d_, std::move(rows));
    }

    /// Emits all slopes for the next (height, pivot set) block.
    void refill() {
        if (pivot_idx_ >= pivot_sets_.size()) advance_height();
        const auto& pivots = pivot_sets_[pivot_idx_++];
        auto slots = free_slots(pivots);
        if (slots.empty()) {
            if (height_ == 1) queue_.push_back(build(pivots, slots, {}));
            return;
        }
        std::vector<size_t> idx(slots.size(), 0);
        while (true) {
            bool fresh = false;
            for (size_t i : idx)
                if (i >= first_new_) fresh = true;
            if (fresh) {
                std::vector<Q> vals;
                vals.reserve(idx.size());
                for (size_t i : idx) vals.push_back(rats_[i]);
                queue_.push_back(build(pivots, slots, vals));
            }
            size_t j = idx.size();
            bool bumped = false;
            while (j-- > 0) {
                if (idx[j] + 1 < rats_.size()) {
                    ++idx[j];
                    std::fill(idx.begin() + static_cast<long>(j) + 1, idx.end(), 0);
                    bumped = true;
                    break;
                }
            }
            if (!bumped) return;
        }
    }

    void advance_height() {
        ++height_;
        first_new_ = rats_.size();
        if (height_ == 1) {
            rats_.push_back(Q(0));
            rats_.push_back(Q(1));
            rats_.push_back(Q(-1));
        } else {
            long h = height_;
            for (long q = 1; q <= h; ++q) {
                for (long p = -h; p <= h; ++p) {
                    if (std::max(p < 0 ? -p : p, q) != h) continue;
                    Z g;
                    mpz_gcd(g.get_mpz_t(), Z(p).get_mpz_t(), Z(q).get_mpz_t());
                    if (g != 1) continue;
                    rats_.push_back(Q(p, q));
                }
            }
        }
        pivot_idx_ = 0;
    }

    int n_, d_;
    long height_ = 0;
    std::vector<std::vector<int>> pivot_sets_;
    size_t pivot_idx_ = 0;
    std::vector<Q> rats_;
    size_t first_new_ = 0;
    std::deque<Slope> queue_;
};

// ---------------------------------------------------------------------------
// Oracles: precision -> rational slope

/// Computable planes are consumed through oracles: query(eps) must return a
/// rational slope within distance eps of the represented plane.
struct SlopeOracle {
    std::function<Slope(const Q&)> query;

    static SlopeOracle constant(Slope s) {
        return SlopeOracle{[s](const Q&) { return s; }};
    }

    /// Oracle for the hyperplane with normal (1, a_1, ..., a_{n-1}) where each
    /// entry is itself given by a rational-approximation function.
    static SlopeOracle from_normal_entries(std::vector<std::function<Q(const Q&)>> entries) {
        return SlopeOracle{[entries](const Q& eps) {
            // Entry error e yields slope distance at most e * sqrt(k) <= e * k.
            Q per_entry = eps / Q(2 * static_cast<long>(entries.size()));
            QVec nu{Q(1)};
            for (const auto& f : entries) nu.push_back(f(per_entry));
            return Slope::from_normal(nu);
        }};
    }
};

/// Rational approximation of sqrt(a) to any requested precision.
inline std::function<Q(const Q&)> sqrt_approximator(const Q& a) {
    return [a](const Q& eps) { return sqrt_enclosure(a, eps).lo; };
}

/// Consistency contract for oracles: answers at precisions e1 and e2 must be
/// within e1 + e2 of each other.
inline bool oracle_consistent(const SlopeOracle& o, const Q& e1, const Q& e2,
                              const Q& tol = Q(1, 1000000000)) {
    QRange d = plane_distance(o.query(e1), o.query(e2), tol);
    return d.lo <= e1 + e2;
}

}  // namespace planar
