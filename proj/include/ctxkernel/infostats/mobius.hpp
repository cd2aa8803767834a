#pragma once

#include <array>
#include <bit>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ctxkernel/infostats/entropy.hpp"

namespace ctxk::infostats {

// Subset-lattice allocation of the label-relevant information over three
// context variables. subset_values holds the inclusion-exclusion atoms
//   f_Y(S) = sum_{T subset S} (-1)^{|S|-|T|} I(Y; C_T),
// and triple_atom_entropy_form the independent conditional-entropy route
//   sum_pairs H(C_i C_j | Y) - sum_singles H(C_i | Y) - H(C0 C1 C2 | Y).
// The two routes agree whenever the unconditioned context marginal carries no
// third-order interaction term (uniform context marginals in particular).
struct MobiusAtoms {
    std::map<std::string, double> subset_values;
    std::string triple_name;               // key of the full subset
    double triple_atom = 0.0;              // inclusion-exclusion route
    double triple_atom_entropy_form = 0.0; // conditional-entropy route
    std::map<std::string, double> normalized_positive;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string subset_name(unsigned mask, std::span<const std::string> vars) {
    std::string name;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (mask & (1u << i))
            name += vars[i];
    return name;
}

inline std::vector<std::string> subset_vars(unsigned mask, std::span<const std::string> vars) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (mask & (1u << i))
            out.push_back(vars[i]);
    return out;
}

inline double conditional_entropy(const JointDist& joint, std::span<const std::string> vars,
                                  const std::string& given, bool corrected) {
    // H(V | Y) = H(V,Y) - H(Y)
    std::vector<std::string> with_y(vars.begin(), vars.end());
    with_y.push_back(given);
    std::vector<std::string> y_only{given};
    return entropy_bits(joint, with_y, corrected) - entropy_bits(joint, y_only, corrected);
}

} // namespace detail

inline MobiusAtoms mobius_triplet_atom(const JointDist& joint, const std::string& y_var,
                                       std::span<const std::string> context_vars,
                                       bool corrected = false) {
    if (context_vars.size() != 3)
        throw invalid_query_error("mobius_triplet_atom: exactly three context variables required");

    MobiusAtoms atoms;

    // degenerate-variable screen
    std::vector<std::string> all_vars{y_var};
    all_vars.insert(all_vars.end(), context_vars.begin(), context_vars.end());
    for (const auto& v : all_vars) {
        std::vector<std::string> one{v};
        if (joint.marginal(one).size() < 2)
            atoms.warnings.push_back("degenerate-distribution: variable '" + v + "' is constant");
    }

    // g(S) = I(Y; C_S) for every nonempty subset
    std::array<double, 8> g{};
    std::vector<std::string> y{y_var};
    for (unsigned mask = 1; mask < 8; ++mask) {
        auto vars = detail::subset_vars(mask, context_vars);
        g[mask] = mutual_information(joint, y, vars, corrected).raw_bits;
    }

    // Moebius inversion on the subset lattice (g(empty) = 0)
    for (unsigned mask = 1; mask < 8; ++mask) {
        double f = 0.0;
        for (unsigned sub = mask;; sub = (sub - 1) & mask) {
            if (sub != 0) {
                int sign = ((std::popcount(mask) - std::popcount(sub)) & 1) ? -1 : 1;
                f += sign * g[sub];
            }
            if (sub == 0)
                break;
        }
        atoms.subset_values[detail::subset_name(mask, context_vars)] = f;
    }
    atoms.triple_name = detail::subset_name(7, context_vars);
    atoms.triple_atom = atoms.subset_values.at(atoms.triple_name);

    // conditional-entropy route for the tripartite atom
    double ent = 0.0;
    for (unsigned mask = 1; mask < 8; ++mask) {
        auto vars = detail::subset_vars(mask, context_vars);
        double h = detail::conditional_entropy(joint, vars, y_var, corrected);
        int size = std::popcount(mask);
        if (size == 2)
            ent += h;
        else if (size == 1)
            ent -= h;
        else
            ent -= h; // the full-triple term
    }
    atoms.triple_atom_entropy_form = ent;

    // normalized positive weights from the inclusion-exclusion values
    double positive_sum = 0.0;
    for (const auto& [name, f] : atoms.subset_values)
        if (f > 0.0)
            positive_sum += f;
    for (const auto& [name, f] : atoms.subset_values)
        atoms.normalized_positive[name] = (f > 0.0 && positive_sum > 0.0) ? f / positive_sum : 0.0;
    if (positive_sum <= 0.0)
        atoms.warnings.push_back("no positive atom: normalized weights are all zero");

    return atoms;
}

inline MobiusAtoms mobius_triplet_atom(const simcore::CountsTable& counts,
                                       const std::string& y_var,
                                       std::span<const std::string> context_vars,
                                       bool corrected = false) {
    return mobius_triplet_atom(JointDist::from_counts(counts), y_var, context_vars, corrected);
}

} // namespace ctxk::infostats
