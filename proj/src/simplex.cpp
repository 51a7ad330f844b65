#include "ordermech/simplex.hpp"

#include <algorithm>
#include <stdexcept>

namespace ordermech {

void LinearProgram::add_row(std::vector<Rat> row, RowSense s, Rat rhs) {
    if (row.size() != cols()) throw std::invalid_argument("lp row width mismatch");
    A.push_back(std::move(row));
    sense.push_back(s);
    b.push_back(std::move(rhs));
}

namespace {

struct Tableau {
    // T is rows x (ncols + 1); last column is the rhs. zrow holds reduced
    // costs (length ncols + 1, last entry = -objective value).
    std::vector<std::vector<Rat>> T;
    std::vector<Rat> zrow;
    std::vector<int> basis;  // basis[r] = column basic in row r
    size_t ncols = 0;
    size_t max_enter = 0;  // columns >= max_enter never enter the basis
    int pivots = 0;

    void pivot(size_t r, size_t col) {
        Rat piv = T[r][col];
        for (auto& v : T[r]) v /= piv;
        for (size_t i = 0; i < T.size(); ++i) {
            if (i == r || T[i][col] == 0) continue;
            Rat k = T[i][col];
            for (size_t j = 0; j <= ncols; ++j) T[i][j] -= k * T[r][j];
        }
        if (zrow[col] != 0) {
            Rat k = zrow[col];
            for (size_t j = 0; j <= ncols; ++j) zrow[j] -= k * T[r][j];
        }
        basis[r] = static_cast<int>(col);
        ++pivots;
    }

    // Maximization step: entering column has positive reduced cost in zrow.
    // Returns false when optimal; throws on unboundedness.
    bool step(bool bland) {
        size_t enter = ncols;
        if (bland) {
            for (size_t j = 0; j < max_enter; ++j)
                if (zrow[j] > 0) { enter = j; break; }
        } else {
            Rat best(0);
            for (size_t j = 0; j < max_enter; ++j)
                if (zrow[j] > best) { best = zrow[j]; enter = j; }
        }
        if (enter == ncols) return false;
        size_t leave = T.size();
        Rat best_ratio;
        for (size_t i = 0; i < T.size(); ++i) {
            if (T[i][enter] <= 0) continue;
            Rat ratio = T[i][ncols] / T[i][enter];
            if (leave == T.size() || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == T.size()) throw std::domain_error("simplex: unbounded");
        pivot(leave, enter);
        return true;
    }

    void run() {
        int degenerate_streak = 0;
        Rat last_obj = -zrow[ncols];
        while (true) {
            bool bland = degenerate_streak > 50;
            if (!step(bland)) return;
            Rat obj = -zrow[ncols];
            if (obj == last_obj)
                ++degenerate_streak;
            else {
                degenerate_streak = 0;
                last_obj = obj;
            }
        }
    }
};

}  // namespace

LpResult solve_lp_exact(const LinearProgram& lp) {
    size_t m = lp.rows(), n = lp.cols();
    // Column layout: structural (n) | slack/surplus (one per <=,>= row) |
    // artificials (for = rows and >= rows, plus <= rows with negative rhs).
    std::vector<size_t> slack_col(m, SIZE_MAX), art_col(m, SIZE_MAX);
    size_t ncols = n;
    for (size_t i = 0; i < m; ++i)
        if (lp.sense[i] != RowSense::EQ) slack_col[i] = ncols++;
    std::vector<char> row_flipped(m, 0);
    size_t first_art = ncols;
    for (size_t i = 0; i < m; ++i) {
        // normalize rhs >= 0 by flipping the row
        Rat rhs = lp.b[i];
        bool flip = rhs < 0;
        row_flipped[i] = flip;
        RowSense s = lp.sense[i];
        if (flip && s == RowSense::LE) s = RowSense::GE;
        else if (flip && s == RowSense::GE) s = RowSense::LE;
        bool needs_art = (s != RowSense::LE);
        if (needs_art) art_col[i] = ncols++;
    }

    Tableau tab;
    tab.ncols = ncols;
    tab.T.assign(m, std::vector<Rat>(ncols + 1, Rat(0)));
    tab.basis.assign(m, -1);
    for (size_t i = 0; i < m; ++i) {
        Rat sign = row_flipped[i] ? Rat(-1) : Rat(1);
        for (size_t j = 0; j < n; ++j) tab.T[i][j] = sign * lp.A[i][j];
        tab.T[i][ncols] = sign * lp.b[i];
        RowSense s = lp.sense[i];
        if (row_flipped[i] && s == RowSense::LE) s = RowSense::GE;
        else if (row_flipped[i] && s == RowSense::GE) s = RowSense::LE;
        if (slack_col[i] != SIZE_MAX)
            tab.T[i][slack_col[i]] = (s == RowSense::GE) ? Rat(-1) : Rat(1);
        if (art_col[i] != SIZE_MAX) {
            tab.T[i][art_col[i]] = Rat(1);
            tab.basis[i] = static_cast<int>(art_col[i]);
        } else {
            tab.basis[i] = static_cast<int>(slack_col[i]);
        }
    }

    LpResult res;

    // Phase 1: maximize -(sum of artificials) when any exist.
    bool have_art = first_art < ncols;
    tab.max_enter = ncols;
    if (have_art) {
        tab.zrow.assign(ncols + 1, Rat(0));
        for (size_t j = first_art; j < ncols; ++j) tab.zrow[j] = Rat(-1);
        // price out basic artificials
        for (size_t i = 0; i < m; ++i)
            if (art_col[i] != SIZE_MAX)
                for (size_t j = 0; j <= ncols; ++j) tab.zrow[j] += tab.T[i][j];
        tab.run();
        Rat phase1 = -tab.zrow[ncols];
        if (phase1 != 0) {
            res.status = LpStatus::Infeasible;
            return res;
        }
        // drive remaining artificials out of the basis where possible
        for (size_t i = 0; i < m; ++i) {
            if (tab.basis[i] < static_cast<int>(first_art)) continue;
            size_t enter = ncols;
            for (size_t j = 0; j < first_art; ++j)
                if (tab.T[i][j] != 0) { enter = j; break; }
            if (enter != ncols) tab.pivot(i, enter);
            // else: redundant row, keep the zero artificial basic
        }
    }

    // Phase 2: artificials are frozen out of the entering set; the z-row
    // stays exact so duals can be read from slack/artificial columns.
    tab.max_enter = first_art;
    tab.zrow.assign(ncols + 1, Rat(0));
    for (size_t j = 0; j < n; ++j) tab.zrow[j] = lp.c[j];
    for (size_t i = 0; i < m; ++i) {
        int bj = tab.basis[i];
        if (bj >= 0 && tab.zrow[bj] != 0) {
            Rat k = tab.zrow[bj];
            for (size_t j = 0; j <= ncols; ++j) tab.zrow[j] -= k * tab.T[i][j];
        }
    }

    try {
        tab.run();
    } catch (const std::domain_error&) {
        res.status = LpStatus::Unbounded;
        return res;
    }

    res.status = LpStatus::Optimal;
    res.x.assign(n, Rat(0));
    for (size_t i = 0; i < m; ++i)
        if (tab.basis[i] >= 0 && tab.basis[i] < static_cast<int>(n))
            res.x[tab.basis[i]] = tab.T[i][ncols];
    res.objective = -tab.zrow[ncols];
    res.pivots = tab.pivots;

    // Duals from slack reduced costs: y_i = -zrow[slack_i] for an unflipped
    // <=-row with +1 slack; sign bookkeeping undoes the normalizations.
    res.y.assign(m, Rat(0));
    for (size_t i = 0; i < m; ++i) {
        if (slack_col[i] == SIZE_MAX) {
            // equality row: recover the multiplier from a basic solve below
            continue;
        }
        Rat yv = -tab.zrow[slack_col[i]];
        // T row was flipped: slack belongs to the flipped row; the original
        // multiplier flips sign as well.
        RowSense s = lp.sense[i];
        bool flip = row_flipped[i];
        // slack coefficient was -1 on (possibly flipped) >= rows
        RowSense eff = s;
        if (flip && s == RowSense::LE) eff = RowSense::GE;
        else if (flip && s == RowSense::GE) eff = RowSense::LE;
        if (eff == RowSense::GE) yv = -yv;
        if (flip) yv = -yv;
        res.y[i] = yv;
    }
    // Equality rows: solve c_j - Σ y_i A_ij = reduced cost for any basic
    // structural columns is automatic; reconstruct equality duals from the
    // artificial columns when present.
    for (size_t i = 0; i < m; ++i) {
        if (slack_col[i] != SIZE_MAX) continue;
        if (art_col[i] == SIZE_MAX) continue;
        Rat yv = -tab.zrow[art_col[i]];
        if (row_flipped[i]) yv = -yv;
        res.y[i] = yv;
    }
    return res;
}

}  // namespace ordermech
