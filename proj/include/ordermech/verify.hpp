#pragma once

#include "ordermech/dual.hpp"
#include "ordermech/mechanism.hpp"

#include <string>
#include <vector>

namespace ordermech {

enum class CsCondition { CS1, CS2, CS3, CS4 };

std::string to_string(CsCondition c);

struct CsViolation {
    CsCondition condition;
    ItemId item;          // item (CS1-CS3) or the worse endpoint of the edge (CS4)
    std::string where;    // label or edge description
    Rat at;
    Rat magnitude;
};

struct CertificateReport {
    std::vector<CsViolation> cs_violations;
    std::vector<IcViolation> ic_violations;
    Rat duality_gap;          // dual objective - expected revenue
    Rat revenue;
    Rat dual_value;
    bool clean() const { return cs_violations.empty() && ic_violations.empty(); }
};

// Complementary slackness audit of a (mechanism, dual) pair:
//   CS1: fΦ > tol  =>  a = 1
//   CS2: fΦ < -tol =>  a = 0
//   CS3: a jumps only where lambda <= tol
//   CS4: flow support only where u_G = u_G' (within tol)
CertificateReport cs_check(const Instance& inst, const Mechanism& mech,
                           const DualSolution& dual, const Rat& tol = Rat(0));

}  // namespace ordermech
