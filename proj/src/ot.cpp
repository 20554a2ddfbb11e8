#include "wspline/ot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "wspline/parallel.hpp"

namespace wspline {

std::size_t Coupling::nonzero_count() const {
    std::size_t k = 0;
    for (double v : plan)
        if (v != 0.0) ++k;
    return k;
}

CostMatrix cost_matrix(const DiscreteMeasure& a, const DiscreteMeasure& b, double p) {
    if (a.dim() != b.dim())
        fail(ErrorCode::DimensionMismatch, "cost matrix needs equal ambient dimensions");
    if (!(p >= 1.0)) fail(ErrorCode::ConfigError, "cost exponent must be >= 1");

    const std::size_t m = a.size(), n = b.size(), d = a.dim();
    CostMatrix c;
    c.rows = m;
    c.cols = n;
    c.exponent = p;
    c.values.resize(m * n);

    const double* xa = a.support().data();
    const double* xb = b.support().data();
    const std::int64_t rows = static_cast<std::int64_t>(m);
    const bool big = m * n * d > 32768;

#pragma omp parallel for schedule(static) num_threads(max_jobs()) if (big && max_jobs() > 1)
    for (std::int64_t i = 0; i < rows; ++i) {
        const double* pi = xa + static_cast<std::size_t>(i) * d;
        double* row = c.values.data() + static_cast<std::size_t>(i) * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* pj = xb + j * d;
            double sq = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = pi[k] - pj[k];
                sq += diff * diff;
            }
            if (p == 2.0)
                row[j] = sq;
            else if (p == 1.0)
                row[j] = std::sqrt(sq);
            else
                row[j] = std::pow(sq, 0.5 * p);
        }
    }
    return c;
}

namespace {

// Transportation simplex over the complete bipartite graph. Nodes 0..m-1 are
// sources, m..m+n-1 sinks; the basis is a spanning tree rooted at source 0.
// The initial basis comes from the northwest-corner rule with ties advancing
// the source index, which makes the tree strongly feasible; the leaving-arc
// rule preserves that invariant, so degenerate pivots cannot cycle.
class TransportSimplex {
public:
    TransportSimplex(std::size_t m, std::size_t n, const double* cost)
        : m_(m), n_(n), num_nodes_(m + n), cost_(cost) {
        parent_.assign(num_nodes_, kNone);
        flow_up_.assign(num_nodes_, 0.0);
        depth_.assign(num_nodes_, 0);
        pot_.assign(num_nodes_, 0.0);
        children_.assign(num_nodes_, {});
    }

    // Returns false when the pivot cap was hit.
    bool solve(const std::vector<double>& supply, const std::vector<double>& demand) {
        northwest_start(supply, demand);
        init_tree();

        double max_cost = 0.0;
        for (std::size_t e = 0; e < m_ * n_; ++e) max_cost = std::max(max_cost, cost_[e]);
        const double tol = 1e-12 * (1.0 + max_cost);

        const std::size_t arc_count = m_ * n_;
        const std::size_t block = std::max<std::size_t>(
            64, static_cast<std::size_t>(std::sqrt(static_cast<double>(arc_count))) + 1);
        std::size_t scan = 0;

        const std::size_t max_pivots = 10000 + 200 * num_nodes_;
        for (std::size_t pivot = 0; pivot < max_pivots; ++pivot) {
            // entering arc: best of the first block (in rolling row-major
            // order) that contains a negative reduced cost
            std::size_t enter = arc_count;
            double best = -tol;
            std::size_t seen = 0;
            std::size_t e = scan;
            std::size_t i = e / n_, j = e % n_;
            double pot_i = pot_[i];
            while (seen < arc_count) {
                const std::size_t stop = std::min(block, arc_count - seen);
                for (std::size_t k = 0; k < stop; ++k) {
                    const double r = cost_[e] - pot_i + pot_[m_ + j];
                    if (r < best) {
                        best = r;
                        enter = e;
                    }
                    ++e;
                    if (++j == n_) {
                        j = 0;
                        if (++i == m_) {
                            i = 0;
                            e = 0;
                        }
                        pot_i = pot_[i];
                    }
                }
                seen += stop;
                if (enter != arc_count) break;
            }
            if (enter == arc_count) return true; // optimal
            scan = e;

            run_pivot(enter / n_, m_ + enter % n_);
        }
        return false;
    }

    // Writes the basic flows into the dense plan.
    void extract_plan(std::vector<double>& plan) const {
        std::fill(plan.begin(), plan.end(), 0.0);
        for (std::size_t v = 0; v < num_nodes_; ++v) {
            if (parent_[v] == kNone) continue;
            const double f = flow_up_[v] > 0.0 ? flow_up_[v] : 0.0;
            std::size_t i, j;
            if (v < m_) {
                i = v;
                j = static_cast<std::size_t>(parent_[v]) - m_;
            } else {
                i = static_cast<std::size_t>(parent_[v]);
                j = v - m_;
            }
            plan[i * n_ + j] = f;
        }
    }

private:
    static constexpr std::int32_t kNone = -1;

    void northwest_start(const std::vector<double>& supply, const std::vector<double>& demand) {
        std::vector<double> ra = supply, rb = demand;
        std::size_t i = 0, j = 0;
        std::size_t last_old = 0, last_new = 0;
        // exactly m+n-1 cells; the new endpoint of each cell hangs off the
        // node shared with the previous cell
        for (std::size_t cell = 0; cell < m_ + n_ - 1; ++cell) {
            const double f = std::min(ra[i], rb[j]);
            if (cell == 0) {
                parent_[m_ + j] = 0;
                flow_up_[m_ + j] = f;
            } else {
                parent_[last_new] = static_cast<std::int32_t>(last_old);
                flow_up_[last_new] = f;
            }
            ra[i] -= f;
            rb[j] -= f;
            if (cell + 1 == m_ + n_ - 1) break;

            // Advance the source side on exhaustion ties (keeps the tree
            // strongly feasible); at the grid edge the direction is forced,
            // which also absorbs any rounding drift between ra and rb.
            bool advance_source;
            if (i + 1 == m_)
                advance_source = false;
            else if (j + 1 == n_)
                advance_source = true;
            else
                advance_source = ra[i] == 0.0;
            if (advance_source) {
                last_old = m_ + j;
                last_new = ++i;
            } else {
                last_old = i;
                last_new = m_ + ++j;
            }
        }
    }

    void init_tree() {
        for (auto& c : children_) c.clear();
        for (std::size_t v = 0; v < num_nodes_; ++v)
            if (parent_[v] != kNone)
                children_[static_cast<std::size_t>(parent_[v])].push_back(
                    static_cast<std::int32_t>(v));
        depth_[0] = 0;
        pot_[0] = 0.0;
        update_subtree(0);
    }

    // Recompute depth and potential below `root` (root itself included
    // unless it is node 0, whose values are fixed).
    void update_subtree(std::size_t root) {
        stack_.clear();
        if (root != 0) set_node(root);
        stack_.push_back(root);
        while (!stack_.empty()) {
            const std::size_t u = stack_.back();
            stack_.pop_back();
            for (const std::int32_t c : children_[u]) {
                set_node(static_cast<std::size_t>(c));
                stack_.push_back(static_cast<std::size_t>(c));
            }
        }
    }

    void set_node(std::size_t v) {
        const std::size_t p = static_cast<std::size_t>(parent_[v]);
        depth_[v] = depth_[p] + 1;
        if (v < m_)
            pot_[v] = cost_[v * n_ + (p - m_)] + pot_[p]; // arc v -> p
        else
            pot_[v] = pot_[p] - cost_[p * n_ + (v - m_)]; // arc p -> v
    }

    void remove_child(std::size_t parent, std::size_t child) {
        auto& list = children_[parent];
        for (std::size_t k = 0; k < list.size(); ++k) {
            if (list[k] == static_cast<std::int32_t>(child)) {
                list[k] = list.back();
                list.pop_back();
                return;
            }
        }
    }

    // Entering arc runs source a_src -> sink b_snk. Applies the ratio test
    // with the strongly-feasible leaving rule (last blocking arc when walking
    // the cycle from the apex in the entering direction), updates flows, and
    // splices the tree.
    void run_pivot(std::size_t a_src, std::size_t b_snk) {
        path_a_.clear();
        path_b_.clear();
        std::size_t x = a_src, y = b_snk;
        while (depth_[x] > depth_[y]) {
            path_a_.push_back(x);
            x = static_cast<std::size_t>(parent_[x]);
        }
        while (depth_[y] > depth_[x]) {
            path_b_.push_back(y);
            y = static_cast<std::size_t>(parent_[y]);
        }
        while (x != y) {
            path_a_.push_back(x);
            path_b_.push_back(y);
            x = static_cast<std::size_t>(parent_[x]);
            y = static_cast<std::size_t>(parent_[y]);
        }
        // path_a_: a_src..child-below-apex (upward); path_b_: likewise for b.

        // Ratio test. Cycle orientation: apex -> a_src -> b_snk -> apex.
        // On the a-side (walked downward) an edge is backward when its child
        // is a source; on the b-side (walked upward) when its child is a sink.
        double theta = std::numeric_limits<double>::infinity();
        std::size_t leave = num_nodes_;
        bool leave_on_a = false;
        for (std::size_t k = path_a_.size(); k-- > 0;) {
            const std::size_t c = path_a_[k];
            if (c < m_ && flow_up_[c] <= theta) { // last blocking arc wins
                theta = flow_up_[c];
                leave = c;
                leave_on_a = true;
            }
        }
        for (std::size_t k = 0; k < path_b_.size(); ++k) {
            const std::size_t c = path_b_[k];
            if (c >= m_ && flow_up_[c] <= theta) {
                theta = flow_up_[c];
                leave = c;
                leave_on_a = false;
            }
        }
        // a bipartite cycle always alternates, so a backward arc exists
        if (leave == num_nodes_)
            fail(ErrorCode::SolverFailure, "pivot cycle without a blocking arc");

        // Flow update: +theta on forward arcs, -theta on backward arcs.
        for (const std::size_t c : path_a_)
            flow_up_[c] += (c < m_) ? -theta : theta;
        for (const std::size_t c : path_b_)
            flow_up_[c] += (c >= m_) ? -theta : theta;

        // Splice: detach the subtree under `leave`, re-root it at the
        // entering endpoint inside it, and hang it off the other endpoint.
        const std::size_t inside = leave_on_a ? a_src : b_snk;
        const std::size_t outside = leave_on_a ? b_snk : a_src;
        chain_.clear();
        for (std::size_t v = inside;; v = static_cast<std::size_t>(parent_[v])) {
            chain_.push_back(v);
            if (v == leave) break;
        }
        for (const std::size_t v : chain_)
            remove_child(static_cast<std::size_t>(parent_[v]), v);

        double carry = theta; // entering arc's new flow
        std::int32_t new_parent = static_cast<std::int32_t>(outside);
        for (const std::size_t v : chain_) {
            const double old_flow = flow_up_[v];
            parent_[v] = new_parent;
            children_[static_cast<std::size_t>(new_parent)].push_back(
                static_cast<std::int32_t>(v));
            flow_up_[v] = carry;
            new_parent = static_cast<std::int32_t>(v);
            carry = old_flow;
        }
        // only the re-rooted subtree changed shape
        update_subtree(inside);
    }

    std::size_t m_, n_, num_nodes_;
    const double* cost_;
    std::vector<std::int32_t> parent_;
    std::vector<double> flow_up_; // flow on the edge to the parent
    std::vector<std::int32_t> depth_;
    std::vector<double> pot_;
    std::vector<std::vector<std::int32_t>> children_;
    std::vector<std::size_t> path_a_, path_b_, chain_, stack_;
};

bool nearly_uniform(const std::vector<double>& weights) {
    const double n = static_cast<double>(weights.size());
    for (double w : weights)
        if (std::abs(w * n - 1.0) > 1e-9) return false;
    return true;
}

// Kuhn's augmenting-path matching over the plan's support. Rows and columns
// are visited in index order, so the result is deterministic.
bool support_matching(const std::vector<double>& plan, std::size_t n,
                      std::vector<std::size_t>& row_to_col) {
    std::vector<std::int32_t> col_owner(n, -1);
    std::vector<char> visited(n);
    const auto augment = [&](auto&& self, std::size_t i) -> bool {
        for (std::size_t j = 0; j < n; ++j) {
            if (visited[j] || plan[i * n + j] <= 0.0) continue;
            visited[j] = 1;
            if (col_owner[j] < 0 || self(self, static_cast<std::size_t>(col_owner[j]))) {
                col_owner[j] = static_cast<std::int32_t>(i);
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(visited.begin(), visited.end(), 0);
        if (!augment(augment, i)) return false;
    }
    row_to_col.assign(n, 0);
    for (std::size_t j = 0; j < n; ++j)
        row_to_col[static_cast<std::size_t>(col_owner[j])] = j;
    return true;
}

// Degenerate cost ties can park the simplex on an optimal vertex with more
// positive entries than a matching. For uniform equal-size marginals the
// support of any optimal plan contains an optimal permutation (every support
// arc has zero reduced cost), so collapse onto one; this keeps repeated
// averaging from inflating cloud supports.
void collapse_to_permutation(Coupling& c, const DiscreteMeasure& a, const DiscreteMeasure& b) {
    const std::size_t n = c.rows;
    if (c.cols != n || n == 0) return;
    if (c.nonzero_count() <= n) return;
    if (!nearly_uniform(a.weights()) || !nearly_uniform(b.weights())) return;

    std::vector<std::size_t> row_to_col;
    if (!support_matching(c.plan, n, row_to_col)) return;
    std::fill(c.plan.begin(), c.plan.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) c.plan[i * n + row_to_col[i]] = a.weights()[i];
}

} // namespace

Coupling solve_kantorovich(const DiscreteMeasure& a, const DiscreteMeasure& b,
                           const CostMatrix& cost) {
    const std::size_t m = a.size(), n = b.size();
    if (cost.rows != m || cost.cols != n)
        fail(ErrorCode::DimensionMismatch, "cost matrix shape does not match the measures");

    std::vector<double> supply = a.weights();
    std::vector<double> demand = b.weights();
    // exact balance: both sides sum to 1 within 1e-12, fold the residual
    // into the largest demand
    double sa = 0.0, sb = 0.0;
    for (double w : supply) sa += w;
    for (double w : demand) sb += w;
    const std::size_t biggest = static_cast<std::size_t>(
        std::max_element(demand.begin(), demand.end()) - demand.begin());
    demand[biggest] += sa - sb;
    if (demand[biggest] <= 0.0)
        fail(ErrorCode::SolverFailure, "weights too far from balanced");

    TransportSimplex simplex(m, n, cost.values.data());
    if (!simplex.solve(supply, demand))
        fail(ErrorCode::SolverFailure, "pivot cap exceeded (balanced problem should always solve)");

    Coupling out;
    out.rows = m;
    out.cols = n;
    out.plan.resize(m * n);
    simplex.extract_plan(out.plan);
    collapse_to_permutation(out, a, b);

    // marginal audit; a failure here is a solver bug, not bad input
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += out.plan[i * n + j];
        if (std::abs(s - a.weights()[i]) > 1e-9)
            fail(ErrorCode::SolverFailure,
                 "row marginal violated by " + std::to_string(s - a.weights()[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += out.plan[i * n + j];
        if (std::abs(s - b.weights()[j]) > 1e-9)
            fail(ErrorCode::SolverFailure,
                 "column marginal violated by " + std::to_string(s - b.weights()[j]));
    }

    double obj = 0.0;
    for (std::size_t e = 0; e < m * n; ++e)
        if (out.plan[e] != 0.0) obj += out.plan[e] * cost.values[e];
    out.objective = obj;
    return out;
}

double wasserstein_distance(const DiscreteMeasure& a, const DiscreteMeasure& b, double p) {
    const Coupling c = solve_kantorovich(a, b, cost_matrix(a, b, p));
    if (p == 1.0) return c.objective;
    if (p == 2.0) return std::sqrt(c.objective);
    return std::pow(c.objective, 1.0 / p);
}

} // namespace wspline
