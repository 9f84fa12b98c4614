#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "planar/linalg.hpp"
#include "planar/rational.hpp"

namespace planar {

/// Halfspace a . z <= b.
struct Halfspace {
    QVec a;
    Q b;
};

/// Bounded convex polytope maintained as an exact vertex set under
/// incremental halfspace cuts, starting from an axis-aligned box.
///
/// The point list always contains every true vertex and only points of the
/// polytope; degenerate cuts may leave extra boundary points, which is
/// harmless for the max/min queries this is used for. true_vertices() filters
/// those out by a rank test on the tight constraint sets.
class ConvexPolytope {
public:
    static ConvexPolytope box(const std::vector<std::pair<Q, Q>>& bounds) {
        ConvexPolytope p;
        p.dim_ = static_cast<int>(bounds.size());
        for (int i = 0; i < p.dim_; ++i) {
            QVec lo(p.dim_, Q(0)), hi(p.dim_, Q(0));
            hi[i] = 1;
            p.constraints_.push_back({hi, bounds[i].second});
            lo[i] = -1;
            p.constraints_.push_back({lo, -bounds[i].first});
        }
        // Corner points of the box.
        size_t corners = size_t{1} << p.dim_;
        for (size_t mask = 0; mask < corners; ++mask) {
            QVec v(p.dim_);
            std::vector<int> tight;
            for (int i = 0; i < p.dim_; ++i) {
                bool high = (mask >> i) & 1;
                v[i] = high ? bounds[i].second : bounds[i].first;
                tight.push_back(2 * i + (high ? 0 : 1));
            }
            std::sort(tight.begin(), tight.end());
            p.points_.push_back(std::move(v));
            p.tight_.push_back(std::move(tight));
        }
        return p;
    }

    int dim() const { return dim_; }
    bool empty() const { return points_.empty(); }
    const std::vector<QVec>& points() const { return points_; }
    const std::vector<Halfspace>& constraints() const { return constraints_; }

    void cut(const Halfspace& h) {
        if (points_.empty()) return;
        int idx = static_cast<int>(constraints_.size());
        constraints_.push_back(h);
        std::vector<Q> slack(points_.size());
        bool any_out = false, all_out = true;
        for (size_t i = 0; i < points_.size(); ++i) {
            slack[i] = h.b - dot(h.a, points_[i]);
            if (sgn(slack[i]) < 0)
                any_out = true;
            else
                all_out = false;
        }
        if (all_out) {
            points_.clear();
            tight_.clear();
            return;
        }
        if (!any_out) {
            for (size_t i = 0; i < points_.size(); ++i)
                if (sgn(slack[i]) == 0) tight_[i].push_back(idx);
            return;
        }
        std::vector<QVec> kept;
        std::vector<std::vector<int>> kept_tight;
        for (size_t i = 0; i < points_.size(); ++i) {
            if (sgn(slack[i]) < 0) continue;
            kept.push_back(points_[i]);
            auto t = tight_[i];
            if (sgn(slack[i]) == 0) t.push_back(idx);
            kept_tight.push_back(std::move(t));
        }
        // New points on edges from an inside vertex to an outside one; the
        // segment lies in the old polytope, so the cut point always does too.
        for (size_t i = 0; i < points_.size(); ++i) {
            if (sgn(slack[i]) <= 0) continue;  // strictly inside matters only
            for (size_t j = 0; j < points_.size(); ++j) {
                if (sgn(slack[j]) >= 0) continue;
                std::vector<int> shared;
                std::set_intersection(tight_[i].begin(), tight_[i].end(), tight_[j].begin(),
                                      tight_[j].end(), std::back_inserter(shared));
                if (static_cast<int>(shared.size()) < dim_ - 1) continue;
                Q denom = slack[i] - slack[j];  // > 0
                Q t = slack[i] / denom;
                QVec p(dim_);
                for (int k = 0; k < dim_; ++k)
                    p[k] = points_[i][k] + t * (points_[j][k] - points_[i][k]);
                shared.push_back(idx);
                kept.push_back(std::move(p));
                kept_tight.push_back(std::move(shared));
            }
        }
        points_.swap(kept);
        tight_.swap(kept_tight);
        dedupe();
    }

    /// Points whose tight constraints have full rank: the genuine vertices.
    std::vector<QVec> true_vertices() const {
        std::vector<QVec> out;
        for (size_t i = 0; i < points_.size(); ++i) {
            QMat m;
            for (int c : tight_[i]) m.push_back(constraints_[static_cast<size_t>(c)].a);
            if (static_cast<int>(rank(std::move(m))) == dim_) out.push_back(points_[i]);
        }
        return out;
    }

    /// Exact maximum of a linear functional over the polytope (attained at a
    /// listed point since the list contains all vertices).
    Q maximize(const QVec& objective) const {
        if (points_.empty()) throw error("maximize: empty polytope");
        Q best = dot(objective, points_[0]);
        for (size_t i = 1; i < points_.size(); ++i) best = rat_max(best, dot(objective, points_[i]));
        return best;
    }

private:
    void dedupe() {
        std::map<QVec, size_t> seen;
        std::vector<QVec> pts;
        std::vector<std::vector<int>> tights;
        for (size_t i = 0; i < points_.size(); ++i) {
            auto it = seen.find(points_[i]);
            if (it == seen.end()) {
                seen.emplace(points_[i], pts.size());
                pts.push_back(points_[i]);
                std::sort(tight_[i].begin(), tight_[i].end());
                tights.push_back(tight_[i]);
            } else {
                // Same point reached along different edges: merge tight sets.
                auto& t = tights[it->second];
                std::vector<int> merged;
                std::sort(tight_[i].begin(), tight_[i].end());
                std::set_union(t.begin(), t.end(), tight_[i].begin(), tight_[i].end(),
                               std::back_inserter(merged));
                t = std::move(merged);
            }
        }
        points_.swap(pts);
        tight_.swap(tights);
    }

    int dim_ = 0;
    std::vector<Halfspace> constraints_;
    std::vector<QVec> points_;
    std::vector<std::vector<int>> tight_;
};

/// Feasibility of a small linear system: is there z in the box with
/// a_i . z <= b_i for all i?
inline bool feasible(const std::vector<std::pair<Q, Q>>& box, const std::vector<Halfspace>& hs) {
    ConvexPolytope p = ConvexPolytope::box(box);
    for (const auto& h : hs) {
        p.cut(h);
        if (p.empty()) return false;
    }
    return true;
}

}  // namespace planar
