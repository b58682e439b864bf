#pragma once

#include "grr/graded.hpp"

#include <memory>
#include <vector>

namespace grr {

struct SpaceData;
using Space = std::shared_ptr<const SpaceData>;

// Accessors implemented with the Space machinery; declared here so bundle
// code does not need the full space definitions.
const RingPtr& space_ring(const Space& s);
int space_dim(const Space& s);
const std::string& space_label(const Space& s);

inline constexpr int kDefaultRootBound = 8;

/**
 * \brief A vector bundle presented by its total Chern class.
 *
 * `chern[i]` is c_{i+1}, homogeneous of degree 2(i+1); entries beyond the
 * stored list are zero. At most min(rank, dim) classes are stored.
 */
struct BundleClass {
    Space space;
    int rank = 0;
    std::vector<GradedElement> chern;

    GradedElement c(std::size_t i) const;  // c_i; c_0 = 1, zero beyond the list
    GradedElement total_chern() const;
};

BundleClass make_bundle(const Space& X, int rank, std::vector<GradedElement> chern);
BundleClass trivial_bundle(const Space& X, int rank);
BundleClass line_bundle(const Space& X, const GradedElement& c1);

// A virtual class: integer rank plus full Chern character.
struct KClass {
    Space space;
    int rank = 0;
    GradedElement ch;
};

KClass make_kclass(const Space& X, int rank, const GradedElement& ch);
KClass kclass_of_line(const Space& X, const GradedElement& c1);  // ch = e^{c1}
KClass operator+(const KClass& a, const KClass& b);
KClass operator-(const KClass& a, const KClass& b);

// Chern character through the Newton power-sum recurrence
// p_k = c_1 p_{k-1} - c_2 p_{k-2} + ... + (-1)^{k-1} k c_k, ch_k = p_k/k!.
KClass chern_to_ch(const BundleClass& E);

// Inverse direction; rejects negative virtual rank.
BundleClass ch_to_chern(const KClass& x);

enum class SymMode { Product, Sum };

// Splitting-principle evaluation: applies the series to each formal Chern
// root, combines by product or sum, rewrites the symmetric result in the
// elementary symmetric polynomials and substitutes e_i -> c_i(E).
GradedElement symmetric_apply(const Series& per_root, const BundleClass& E, SymMode mode,
                              int root_bound = kDefaultRootBound);

GradedElement todd(const BundleClass& E);
BundleClass dual(const BundleClass& E);
BundleClass twist_by_line(const BundleClass& E, const BundleClass& L,
                          int root_bound = kDefaultRootBound);
BundleClass whitney_sum(const BundleClass& E, const BundleClass& F);
KClass tensor_ch(const KClass& x, const KClass& y);
GradedElement segre(const BundleClass& E);

// sum_k (-1)^k [Lambda^k E], assembled from explicit exterior powers in the
// root workspace.
KClass lambda_minus_one(const BundleClass& E, int root_bound = kDefaultRootBound);

}  // namespace grr
