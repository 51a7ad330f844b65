#include "ordermech/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace ordermech {

Rat GridInstance::tail_mass(ItemId g, size_t i) const {
    Rat t(0);
    for (size_t j = i + 1; j < n(); ++j) t += mass[g][j];
    return t;
}

Rat GridInstance::phi_hat(ItemId g, size_t i) const {
    if (mass[g][i] == 0) return v[i];  // zero-mass cell: value is irrelevant
    Rat gap = (i + 1 < n()) ? v[i + 1] - v[i] : Rat(0);
    return v[i] - gap * tail_mass(g, i) / mass[g][i];
}

Rat GridInstance::max_cell_width() const {
    Rat w = v[0];  // first cell spans (0, v_1]
    for (size_t i = 1; i < n(); ++i) w = std::max(w, v[i] - v[i - 1]);
    return w;
}

GridInstance discretize(const Instance& inst, size_t target_cells) {
    if (target_cells < 2) throw std::invalid_argument("discretize: need at least 2 cells");
    // Cell edges: density breakpoints always; the full canonical curve grid
    // when the budget allows; then uniform refinement toward the target.
    std::vector<Rat> edges{Rat(0), inst.H()};
    for (const auto& m : inst.marginals())
        for (const Rat& b : m.density.breaks()) edges.push_back(b);
    std::vector<Rat> curve_pts;
    for (size_t gi = 0; gi < inst.items(); ++gi)
        for (const Rat& b : inst.curve(static_cast<ItemId>(gi)).breaks()) curve_pts.push_back(b);
    std::sort(curve_pts.begin(), curve_pts.end());
    curve_pts.erase(std::unique(curve_pts.begin(), curve_pts.end()), curve_pts.end());
    if (curve_pts.size() <= target_cells + 1)
        edges.insert(edges.end(), curve_pts.begin(), curve_pts.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    while (edges.size() - 1 < target_cells) {
        // split the widest cell
        size_t widest = 0;
        Rat w(0);
        for (size_t i = 0; i + 1 < edges.size(); ++i)
            if (edges[i + 1] - edges[i] > w) {
                w = edges[i + 1] - edges[i];
                widest = i;
            }
        edges.insert(edges.begin() + widest + 1, (edges[widest] + edges[widest + 1]) / 2);
    }

    GridInstance g;
    g.poset = inst.poset();
    g.H = inst.H();
    g.v.assign(edges.begin() + 1, edges.end());
    g.mass.assign(inst.items(), {});
    for (size_t gi = 0; gi < inst.items(); ++gi) {
        ItemId id = static_cast<ItemId>(gi);
        for (size_t i = 0; i + 1 < edges.size(); ++i)
            g.mass[gi].push_back(inst.mass_above(id, edges[i]) -
                                 inst.mass_above(id, edges[i + 1]));
    }
    return g;
}

namespace {

// Increment formulation: a_g(i) = sum_{t<=i} d_g(t); monotonicity and the
// [0,1] box reduce to d >= 0 and sum_t d_g(t) <= 1.
struct GridLpBuilder {
    const GridInstance& g;
    size_t n, m;
    std::vector<std::pair<ItemId, ItemId>> edges;

    explicit GridLpBuilder(const GridInstance& gi)
        : g(gi), n(gi.n()), m(gi.items()), edges(gi.poset.edges()) {}

    size_t var(size_t item, size_t t) const { return item * n + t; }

    std::vector<Rat> objective() const {
        std::vector<Rat> c(m * n, Rat(0));
        for (size_t gi = 0; gi < m; ++gi) {
            Rat acc(0);
            for (size_t i = n; i-- > 0;) {
                acc += g.mass[gi][i] * g.phi_hat(static_cast<ItemId>(gi), i);
                c[var(gi, i)] = acc;
            }
        }
        return c;
    }

    // u_b(v_k) - u_w(v_k) <= 0 row for edge e at grid index k (k >= 1).
    std::vector<Rat> dominance_row(size_t e, size_t k) const {
        std::vector<Rat> row(m * n, Rat(0));
        auto [w, b] = edges[e];
        for (size_t t = 0; t < k; ++t) {
            Rat coef = g.v[k] - g.v[t];
            row[var(b, t)] += coef;
            row[var(w, t)] -= coef;
        }
        return row;
    }

    // utilities at every grid point from an increment vector
    std::vector<std::vector<Rat>> utilities(const std::vector<Rat>& x) const {
        std::vector<std::vector<Rat>> u(m, std::vector<Rat>(n, Rat(0)));
        for (size_t gi = 0; gi < m; ++gi) {
            Rat a(0), acc(0);
            for (size_t i = 0; i + 1 < n; ++i) {
                a += x[var(gi, i)];
                acc += a * (g.v[i + 1] - g.v[i]);
                u[gi][i + 1] = acc;
            }
        }
        return u;
    }
};

}  // namespace

LPSolution solve_grid_lp(const GridInstance& g) {
    GridLpBuilder B(g);
    size_t n = B.n, m = B.m, E = B.edges.size();

    // active dominance rows, per edge
    std::vector<std::vector<char>> active(E, std::vector<char>(n, 0));
    size_t stride = std::max<size_t>(1, n / 24);
    for (size_t e = 0; e < E; ++e) {
        for (size_t k = 1; k < n; k += stride) active[e][k] = 1;
        active[e][n - 1] = 1;
    }

    std::vector<Rat> c = B.objective();
    LpResult res;
    std::vector<std::pair<size_t, size_t>> row_of;  // (edge, k) per dominance row
    int rounds = 0;
    while (true) {
        ++rounds;
        LinearProgram lp;
        lp.c = c;
        row_of.clear();
        for (size_t gi = 0; gi < m; ++gi) {
            std::vector<Rat> row(m * n, Rat(0));
            for (size_t t = 0; t < n; ++t) row[B.var(gi, t)] = Rat(1);
            lp.add_row(std::move(row), RowSense::LE, Rat(1));
        }
        for (size_t e = 0; e < E; ++e)
            for (size_t k = 1; k < n; ++k)
                if (active[e][k]) {
                    lp.add_row(B.dominance_row(e, k), RowSense::LE, Rat(0));
                    row_of.push_back({e, k});
                }
        res = solve_lp_exact(lp);
        if (res.status != LpStatus::Optimal)
            throw std::logic_error("grid LP should always be solvable");

        // exact separation over every dominance row
        auto u = B.utilities(res.x);
        bool added = false;
        for (size_t e = 0; e < E; ++e) {
            auto [w, b] = B.edges[e];
            for (size_t k = 1; k < n; ++k) {
                if (active[e][k]) continue;
                if (u[b][k] > u[w][k]) {
                    active[e][k] = 1;
                    added = true;
                }
            }
        }
        if (!added) break;
        if (rounds > 80) throw std::logic_error("grid LP: separation did not converge");
    }

    LPSolution sol;
    sol.cut_rounds = rounds;
    sol.pivots = res.pivots;
    sol.objective = res.objective;
    sol.alloc.assign(m, std::vector<Rat>(n, Rat(0)));
    for (size_t gi = 0; gi < m; ++gi) {
        Rat a(0);
        for (size_t i = 0; i < n; ++i) {
            a += res.x[B.var(gi, i)];
            sol.alloc[gi][i] = a;
        }
    }
    // discrete payment identity: p(i) = v_i a(i) - u(i)
    auto u = B.utilities(res.x);
    sol.payment.assign(m, std::vector<Rat>(n, Rat(0)));
    for (size_t gi = 0; gi < m; ++gi)
        for (size_t i = 0; i < n; ++i)
            sol.payment[gi][i] = g.v[i] * sol.alloc[gi][i] - u[gi][i];

    sol.box_dual.assign(m, Rat(0));
    for (size_t gi = 0; gi < m; ++gi) sol.box_dual[gi] = res.y[gi];
    sol.dom_dual.assign(E, std::vector<Rat>(n, Rat(0)));
    for (size_t r = 0; r < row_of.size(); ++r)
        sol.dom_dual[row_of[r].first][row_of[r].second] = res.y[m + r];

    // Monotonicity multipliers from the increment-space stationarity:
    //   s(t) = (y·col_t - c_t) - (y·col_{t+1} - c_{t+1});  λ(t-1) = λ(t) + s(t)
    // clipped at zero (the clip corresponds to the nonnegativity multiplier
    // of a_t, which is complementary to a_t = 0 at an optimal basis).
    sol.mono_dual.assign(m, std::vector<Rat>(n, Rat(0)));
    {
        // reduced costs of all increment columns
        std::vector<Rat> rc(m * n, Rat(0));
        for (size_t gi = 0; gi < m; ++gi)
            for (size_t t = 0; t < n; ++t) {
                Rat acc = sol.box_dual[gi] - c[B.var(gi, t)];
                for (size_t r = 0; r < row_of.size(); ++r) {
                    auto [e, k] = row_of[r];
                    if (res.y[m + r] == 0 || t >= k) continue;
                    auto [w, b] = B.edges[e];
                    Rat coef = g.v[k] - g.v[t];
                    if (static_cast<size_t>(b) == gi) acc += res.y[m + r] * coef;
                    if (static_cast<size_t>(w) == gi) acc -= res.y[m + r] * coef;
                }
                rc[B.var(gi, t)] = acc;
            }
        for (size_t gi = 0; gi < m; ++gi) {
            Rat lam(0);  // λ(n) = 0
            for (size_t t = n; t-- > 1;) {
                Rat rc_t = rc[B.var(gi, t)];
                Rat rc_next = (t + 1 < n) ? rc[B.var(gi, t + 1)] : Rat(0);
                lam += rc_t - rc_next;
                if (lam < 0) lam = Rat(0);
                sol.mono_dual[gi][t - 1] = lam;
            }
        }
    }

    Rat above_first(0);
    for (size_t gi = 0; gi < m; ++gi)
        above_first += g.tail_mass(static_cast<ItemId>(gi), 0) + g.mass[gi][0];
    sol.discretization_bound = g.max_cell_width() * above_first;
    return sol;
}

Mechanism mechanism_from_grid(const GridInstance& g, const LPSolution& s) {
    AllocationRule a;
    for (size_t gi = 0; gi < g.items(); ++gi) {
        std::vector<StepJump> jumps;
        Rat prev(0);
        for (size_t i = 0; i < g.n(); ++i) {
            if (s.alloc[gi][i] != prev) {
                jumps.push_back({g.v[i], s.alloc[gi][i]});
                prev = s.alloc[gi][i];
            }
        }
        a.alloc.push_back(step_from_jumps(Rat(0), g.H, jumps));
    }
    return payments_from_allocation(std::move(a));
}

DeterministicBest best_deterministic(const GridInstance& g, size_t enumeration_limit) {
    size_t m = g.items();
    auto topo = g.poset.topo_order();

    // candidate price indices per item, thinned if the search would blow up
    std::vector<std::vector<size_t>> cand(m);
    size_t full = g.n();
    double combos = 1;
    for (size_t gi = 0; gi < m; ++gi) combos *= static_cast<double>(full);
    size_t per_item = full;
    bool pruned = false;
    if (combos > static_cast<double>(enumeration_limit)) {
        per_item = std::max<size_t>(
            4, static_cast<size_t>(std::pow(static_cast<double>(enumeration_limit),
                                            1.0 / static_cast<double>(m))));
        pruned = per_item < full;
    }
    for (size_t gi = 0; gi < m; ++gi) {
        if (!pruned) {
            for (size_t i = 0; i < full; ++i) cand[gi].push_back(i);
        } else {
            // uniform thinning plus the item's own grid-optimal price
            for (size_t k = 0; k < per_item; ++k)
                cand[gi].push_back(k * (full - 1) / (per_item - 1));
            Rat best(-1);
            size_t arg = 0;
            for (size_t i = 0; i < full; ++i) {
                Rat rev = g.v[i] * (g.mass[gi][i] + g.tail_mass(static_cast<ItemId>(gi), i));
                if (rev > best) { best = rev; arg = i; }
            }
            cand[gi].push_back(arg);
            std::sort(cand[gi].begin(), cand[gi].end());
            cand[gi].erase(std::unique(cand[gi].begin(), cand[gi].end()), cand[gi].end());
        }
    }

    // revenue of item g priced at grid index i: v_i * mass[v >= v_i]
    std::vector<std::vector<Rat>> item_rev(m, std::vector<Rat>(g.n()));
    for (size_t gi = 0; gi < m; ++gi)
        for (size_t i = 0; i < g.n(); ++i)
            item_rev[gi][i] =
                g.v[i] * (g.mass[gi][i] + g.tail_mass(static_cast<ItemId>(gi), i));

    std::vector<size_t> choice(m, 0);
    std::vector<size_t> best_choice(m, 0);
    Rat best(-1);
    std::function<void(size_t, Rat)> rec = [&](size_t pos, Rat acc) {
        if (pos == m) {
            if (acc > best) {
                best = acc;
                best_choice = choice;
            }
            return;
        }
        ItemId item = topo[pos];
        // lower bound from already-priced predecessors (they are earlier in topo order)
        size_t lb = 0;
        for (ItemId p : g.poset.predecessors(item)) {
            for (size_t q = 0; q < pos; ++q)
                if (topo[q] == p) lb = std::max(lb, choice[p]);
        }
        for (size_t idx : cand[item]) {
            if (idx < lb) continue;
            choice[item] = idx;
            rec(pos + 1, acc + item_rev[item][idx]);
        }
    };
    rec(0, Rat(0));

    DeterministicBest out;
    out.pruned = pruned;
    out.revenue = best;
    out.prices.assign(m, Rat(0));
    for (size_t gi = 0; gi < m; ++gi) out.prices[gi] = g.v[best_choice[gi]];
    return out;
}

Rat grid_dual_objective(const GridInstance& g, const DualSolution& d) {
    size_t n = g.n(), m = g.items();
    const auto& edges = g.poset.edges();

    // lambda sampled at grid points; alpha mapped to the smallest grid
    // point at or above its support
    std::vector<std::vector<Rat>> lam(m, std::vector<Rat>(n, Rat(0)));
    for (size_t gi = 0; gi < m; ++gi)
        for (size_t i = 0; i < n; ++i) lam[gi][i] = d.lambda[gi](g.v[i]);

    std::vector<std::vector<Rat>> alpha(edges.size(), std::vector<Rat>(n, Rat(0)));
    auto grid_index_at_or_above = [&](const Rat& y) {
        size_t i = std::lower_bound(g.v.begin(), g.v.end(), y) - g.v.begin();
        return std::min(i, n - 1);
    };
    for (size_t e = 0; e < edges.size(); ++e) {
        const FlowVar* fv = d.flow_on(e);
        if (!fv) continue;
        for (const auto& a : fv->atoms) alpha[e][grid_index_at_or_above(a.at)] += a.mass;
        if (fv->density) {
            Rat lo(0);
            for (size_t i = 0; i < n; ++i) {
                alpha[e][i] += fv->density->integral(lo, g.v[i]);
                lo = g.v[i];
            }
        }
    }

    // strict-tail sums of alpha per edge
    std::vector<std::vector<Rat>> atail(edges.size(), std::vector<Rat>(n + 1, Rat(0)));
    for (size_t e = 0; e < edges.size(); ++e)
        for (size_t i = n; i-- > 0;) atail[e][i] = atail[e][i + 1] + alpha[e][i];

    // Lagrangian coefficients per (item, grid index)
    Rat total(0);
    for (size_t gi = 0; gi < m; ++gi) {
        for (size_t i = 0; i < n; ++i) {
            Rat coef = g.mass[gi][i] * g.phi_hat(static_cast<ItemId>(gi), i);
            // ironing: + λ(i-1) - λ(i) with λ(0-) = 0
            coef -= lam[gi][i];
            if (i > 0) coef += lam[gi][i - 1];
            // flows: the coefficient of a(i) in u(v_k) is (v_{i+1}-v_i) for i < k
            Rat gap = (i + 1 < n) ? g.v[i + 1] - g.v[i] : Rat(0);
            if (gap != 0) {
                for (size_t e = 0; e < edges.size(); ++e) {
                    auto [w, b] = edges[e];
                    if (static_cast<size_t>(w) == gi) coef += gap * atail[e][i + 1];
                    if (static_cast<size_t>(b) == gi) coef -= gap * atail[e][i + 1];
                }
            }
            if (coef > 0) total += coef;
        }
    }
    return total;
}

Rat enumerate_vertices_optimum(const GridInstance& g) {
    GridLpBuilder B(g);
    size_t nv = B.m * B.n;
    if (nv > 12) throw std::invalid_argument("vertex enumeration limited to 12 variables");

    // constraint list: rows (a·d <= rhs); vertices solve nv tight rows
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;
    for (size_t gi = 0; gi < B.m; ++gi) {
        std::vector<Rat> row(nv, Rat(0));
        for (size_t t = 0; t < B.n; ++t) row[B.var(gi, t)] = Rat(1);
        rows.push_back(row);
        rhs.push_back(Rat(1));
    }
    for (size_t e = 0; e < B.edges.size(); ++e)
        for (size_t k = 1; k < B.n; ++k) {
            rows.push_back(B.dominance_row(e, k));
            rhs.push_back(Rat(0));
        }
    for (size_t j = 0; j < nv; ++j) {
        std::vector<Rat> row(nv, Rat(0));
        row[j] = Rat(-1);
        rows.push_back(row);
        rhs.push_back(Rat(0));
    }

    std::vector<Rat> c = B.objective();
    Rat best(0);  // d = 0 is feasible
    size_t R = rows.size();
    std::vector<size_t> pick;
    std::function<void(size_t)> search = [&](size_t start) {
        if (pick.size() == nv) {
            // solve the tight system
            std::vector<std::vector<Rat>> M(nv, std::vector<Rat>(nv + 1, Rat(0)));
            for (size_t r = 0; r < nv; ++r) {
                for (size_t j = 0; j < nv; ++j) M[r][j] = rows[pick[r]][j];
                M[r][nv] = rhs[pick[r]];
            }
            // gaussian elimination
            for (size_t col = 0, row = 0; col < nv && row < nv; ++col) {
                size_t piv = row;
                while (piv < nv && M[piv][col] == 0) ++piv;
                if (piv == nv) return;  // singular: not a vertex basis
                std::swap(M[piv], M[row]);
                for (size_t r2 = 0; r2 < nv; ++r2) {
                    if (r2 == row || M[r2][col] == 0) continue;
                    Rat k = M[r2][col] / M[row][col];
                    for (size_t j2 = col; j2 <= nv; ++j2) M[r2][j2] -= k * M[row][j2];
                }
                ++row;
            }
            std::vector<Rat> x(nv);
            for (size_t r = 0; r < nv; ++r) {
                size_t lead = 0;
                while (lead < nv && M[r][lead] == 0) ++lead;
                if (lead == nv) return;
                x[lead] = M[r][nv] / M[r][lead];
            }
            // feasibility
            for (size_t r = 0; r < R; ++r) {
                Rat lhs(0);
                for (size_t j = 0; j < nv; ++j)
                    if (rows[r][j] != 0) lhs += rows[r][j] * x[j];
                if (lhs > rhs[r]) return;
            }
            Rat val(0);
            for (size_t j = 0; j < nv; ++j) val += c[j] * x[j];
            best = std::max(best, val);
            return;
        }
        if (start >= R) return;
        if (R - start < nv - pick.size()) return;
        pick.push_back(start);
        search(start + 1);
        pick.pop_back();
        search(start + 1);
    };
    search(0);
    return best;
}

}  // namespace ordermech
