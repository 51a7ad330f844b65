#pragma once

#include "ordermech/dist.hpp"

#include <string>
#include <vector>

namespace ordermech {

// Per-item allocation rule: a right-continuous nondecreasing step function
// [0,H] -> [0,1] per item.
struct AllocationRule {
    std::vector<PiecewiseFn> alloc;  // indexed by ItemId

    const PiecewiseFn& of(ItemId g) const { return alloc.at(g); }
};

struct Mechanism {
    AllocationRule allocation;
    std::vector<PiecewiseFn> payments;  // step functions, via the payment identity

    const PiecewiseFn& alloc(ItemId g) const { return allocation.alloc.at(g); }
    const PiecewiseFn& payment(ItemId g) const { return payments.at(g); }
    // Buyer utility u_G(v) = ∫_0^v a_G (continuous piecewise-linear).
    PiecewiseFn utility(ItemId g) const { return allocation.alloc.at(g).antiderivative(); }
};

// p_G(v) = v a_G(v) - ∫_0^v a_G(w) dw, closed form per step.
Mechanism payments_from_allocation(AllocationRule a);

Mechanism posted_prices(const Instance& inst, const std::vector<Rat>& prices);

struct IcViolation {
    std::string what;
    ItemId item;
    Rat at;
    Rat magnitude;
};

// Monotonicity per item plus utility dominance along every poset edge.
std::vector<IcViolation> ic_check(const Instance& inst, const Mechanism& mech);

struct RevenueReport {
    Rat expected_payment;  // Σ_G ∫ f p
    Rat virtual_welfare;   // Σ_G ∫ a γ
    Rat mismatch() const { return expected_payment - virtual_welfare; }
};

RevenueReport revenue(const Instance& inst, const Mechanism& mech);

struct MenuComplexity {
    int total = 0;
    std::vector<int> per_item;  // distinct positive allocation levels
};

// Distinct (item, probability) pairs with probability > 0.
MenuComplexity menu_complexity(const Mechanism& mech);

// Menu as (item, probability, price) rows.
struct MenuEntry {
    ItemId item;
    Rat probability;
    Rat price;
};
std::vector<MenuEntry> menu_of(const Mechanism& mech);

}  // namespace ordermech
