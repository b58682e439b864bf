#pragma once

#include "grr/spaces.hpp"

#include <map>
#include <utility>
#include <vector>

namespace grr {

struct SNCBranch {
    Immersion imm;  // smooth hypersurface D_i -> X, rank-1 normal bundle
    int mult = 1;   // m_i >= 1
};

// Gysin data for one pairwise intersection D_ij = D_i cap D_j together with
// its inclusions into the two branches.
struct SNCPair {
    Space sub;  // D_ij
    ClsMap restrict_from_ambient;  // A(X) -> A(D_ij)
    ClsMap restrict_from_i;        // A(D_i) -> A(D_ij)
    ClsMap push_into_i;            // A(D_ij) -> A(D_i)
    ClsMap restrict_from_j;
    ClsMap push_into_j;
};

struct SNCDivisor {
    Space ambient;
    std::vector<SNCBranch> branches;
    std::map<std::pair<int, int>, SNCPair> pairwise;  // keys (i, j) with i < j

    int n_branches() const { return int(branches.size()); }
    const SNCPair& pair(int i, int j) const;  // requires i < j
};

// Built-in transverse configurations (up to three branches).
SNCDivisor coordinate_lines_p2(const std::vector<int>& mults);
SNCDivisor coordinate_planes_p3(const std::vector<int>& mults);

// A torsion class supported on one branch, carried at ch level.
struct TorsionClass {
    int branch = 0;
    KClass payload;  // the bar-class on D_i
};

// S = sum m_i {D_i} in A(X).
GradedElement sum_cycle(const SNCDivisor& D);

// mu = sum_{k>=1} (-1)^{k-1}/k! S^{k-1}; satisfies S mu = 1 - e^{-S}.
GradedElement mu_series(const SNCDivisor& D);

// GRR-forced Chern character of a pushed-forward class:
// i_*(ch(payload) td(N)^{-1}).
GradedElement ch_torsion(const Immersion& imm, const KClass& payload);
GradedElement ch_torsion_on_branch(const SNCDivisor& D, const TorsionClass& t);

// 1 - e^{-sum m_i {D_i}} for an effective divisor supported on D; empty
// `mults` uses D's own multiplicities.
GradedElement ch_structure_sheaf(const SNCDivisor& D, const std::vector<int>& mults = {});

struct UZeta {
    std::vector<TorsionClass> u;                        // u_i, one per branch
    std::map<std::pair<int, int>, GradedElement> zeta;  // all ordered pairs i != j

    const GradedElement& zeta_at(int i, int j) const;
};

// The inductive construction of (u_i, zeta_ij): base case
// u_1 = sum_q N^{* x q}, step u_N = i^*[O(-D') sum_q O(-q D_N)] on D_N,
// with the antisymmetric correction table zeta.
UZeta build_u_zeta(const SNCDivisor& D);

// Both sides of the combination identity
//   sum_i i_*(alpha_i ch(u_i) td(N_i)^{-1}) = (sum_i m_i i_* alpha_i) mu
// for branchwise classes with matching restrictions to every D_ij; returns
// the common value. RestrictionMismatch when the compatibility fails,
// IdentityViolation when the two sides disagree (an engine bug).
GradedElement combine_alpha(const SNCDivisor& D, const std::vector<GradedElement>& alpha);

}  // namespace grr
