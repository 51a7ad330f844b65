#include "ordermech/mechanism.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ordermech {

Mechanism payments_from_allocation(AllocationRule a) {
    Mechanism m;
    m.payments.reserve(a.alloc.size());
    for (auto& fn : a.alloc) {
        if (!fn.is_step()) throw std::invalid_argument("allocation must be a step function");
        const auto& vals = fn.icepts();
        for (size_t i = 0; i < vals.size(); ++i) {
            if (vals[i] < 0 || vals[i] > 1)
                throw std::invalid_argument("allocation outside [0,1]");
            if (i && vals[i] < vals[i - 1])
                throw std::invalid_argument("allocation not monotone");
        }
        PiecewiseFn u = fn.antiderivative();
        // p is constant on each piece: v*a - u(v) = a*b_i - u(b_i) there
        std::vector<Rat> pay;
        const auto& b = fn.breaks();
        for (size_t i = 0; i + 1 < b.size(); ++i)
            pay.push_back(vals[i] * b[i] - u(b[i]));
        m.payments.push_back(PiecewiseFn::step(b, pay));
    }
    m.allocation = std::move(a);
    return m;
}

Mechanism posted_prices(const Instance& inst, const std::vector<Rat>& prices) {
    AllocationRule a;
    for (size_t g = 0; g < inst.items(); ++g) {
        const Rat& p = prices.at(g);
        if (p < 0 || p > inst.H()) throw std::invalid_argument("price outside [0,H]");
        if (p >= inst.H())
            a.alloc.push_back(PiecewiseFn::constant(Rat(0), inst.H(), Rat(0)));
        else
            a.alloc.push_back(step_from_jumps(Rat(0), inst.H(), {{p, Rat(1)}}));
    }
    return payments_from_allocation(std::move(a));
}

std::vector<IcViolation> ic_check(const Instance& inst, const Mechanism& mech) {
    std::vector<IcViolation> out;
    for (size_t g = 0; g < inst.items(); ++g) {
        const auto& fn = mech.alloc(static_cast<ItemId>(g));
        const auto& vals = fn.icepts();
        for (size_t i = 0; i < vals.size(); ++i) {
            if (vals[i] < 0 || vals[i] > 1)
                out.push_back({"allocation outside [0,1]", static_cast<ItemId>(g),
                               fn.breaks()[i], vals[i]});
            if (i && vals[i] < vals[i - 1])
                out.push_back({"allocation not monotone", static_cast<ItemId>(g),
                               fn.breaks()[i], vals[i - 1] - vals[i]});
        }
    }
    for (auto& [worse, better] : inst.poset().edges()) {
        PiecewiseFn diff = mech.utility(worse) - mech.utility(better);
        for (auto& [v, y] : diff.vertices()) {
            if (y < 0)
                out.push_back({"utility dominance violated on edge (" +
                                   inst.poset().label(worse) + "," +
                                   inst.poset().label(better) + ")",
                               worse, v, -y});
        }
    }
    return out;
}

RevenueReport revenue(const Instance& inst, const Mechanism& mech) {
    RevenueReport r{Rat(0), Rat(0)};
    for (size_t g = 0; g < inst.items(); ++g) {
        ItemId id = static_cast<ItemId>(g);
        const PiecewiseFn& pay = mech.payment(id);
        const auto& b = pay.breaks();
        const auto& p = pay.icepts();
        for (size_t i = 0; i + 1 < b.size(); ++i)
            r.expected_payment +=
                p[i] * (inst.mass_above(id, b[i]) - inst.mass_above(id, b[i + 1]));

        // virtual-welfare form: ∫ a γ with γ = -R'
        const PiecewiseFn& R = inst.curve(static_cast<ItemId>(g));
        const auto& a = mech.alloc(static_cast<ItemId>(g));
        const auto& ab = a.breaks();
        const auto& av = a.icepts();
        for (size_t i = 0; i + 1 < ab.size(); ++i)
            r.virtual_welfare += av[i] * (R(ab[i]) - R(ab[i + 1]));
    }
    return r;
}

MenuComplexity menu_complexity(const Mechanism& mech) {
    MenuComplexity mc;
    for (const auto& fn : mech.allocation.alloc) {
        std::set<Rat> levels;
        for (const Rat& v : fn.canonical().icepts())
            if (v > 0) levels.insert(v);
        mc.per_item.push_back(static_cast<int>(levels.size()));
        mc.total += static_cast<int>(levels.size());
    }
    return mc;
}

std::vector<MenuEntry> menu_of(const Mechanism& mech) {
    std::vector<MenuEntry> menu;
    for (size_t g = 0; g < mech.allocation.alloc.size(); ++g) {
        std::set<std::pair<Rat, Rat>> seen;
        auto fn = mech.alloc(static_cast<ItemId>(g)).canonical();
        auto pay = mech.payment(static_cast<ItemId>(g));
        const auto& b = fn.breaks();
        const auto& v = fn.icepts();
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i] <= 0) continue;
            if (seen.insert({v[i], pay(b[i])}).second)
                menu.push_back({static_cast<ItemId>(g), v[i], pay(b[i])});
        }
    }
    return menu;
}

}  // namespace ordermech
