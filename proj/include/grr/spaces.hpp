#pragma once

#include "grr/classes.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace grr {

struct BlowupData;

enum class SpaceKind { Point, Projective, ProjBundle, ProductP1, Blowup, Formal };

/**
 * \brief A class in A(X) for any space backend.
 *
 * Presented spaces store a plain GradedElement. Blowup spaces store the
 * module decomposition (x; y_1, ..., y_{d-1}) standing for
 * p*x + sum_k j_*(y_k xi^{k-1}) with xi = c_1(O_N(-1)) on the exceptional
 * divisor; the decomposition is unique, so equality is componentwise.
 */
class Cls {
public:
    Cls() = default;

    static Cls of(const Space& s, GradedElement poly);
    static Cls of_blowup(const Space& s, GradedElement base, std::vector<GradedElement> exc);
    static Cls zero(const Space& s);
    static Cls constant(const Space& s, const Rational& q);

    const Space& space() const { return space_; }
    bool valid() const { return space_ != nullptr; }
    bool is_zero() const;

    // presented backend
    const GradedElement& poly() const;
    // blowup backend
    const GradedElement& base() const;
    const std::vector<GradedElement>& exc() const;

    Cls operator-() const;
    bool operator==(const Cls& b) const;
    bool operator!=(const Cls& b) const { return !(*this == b); }

    std::string str() const;
    std::string latex() const;

    friend Cls operator+(const Cls& a, const Cls& b);
    friend Cls operator-(const Cls& a, const Cls& b);
    friend Cls operator*(const Cls& a, const Cls& b);
    friend Cls operator*(const Rational& q, const Cls& a);

private:
    Space space_;
    GradedElement poly_;               // presented; also the base part for blowups
    std::vector<GradedElement> exc_;   // blowup slots, size d-1
};

using ClsMap = std::function<Cls(const Cls&)>;

// A morphism between space models: a pullback ring map and optionally a
// Gysin pushforward with the complementary degree shift.
struct Morphism {
    Space source, target;
    ClsMap pullback;      // A(target) -> A(source)
    ClsMap pushforward;   // A(source) -> A(target); may be empty
};

struct ImmersionProvenance {
    enum Kind { Custom, Linear, Fiber, Exceptional } kind = Custom;
    int n = 0, k = 0;  // Linear: P^k in P^n
};

// A closed immersion with explicit Gysin data. Everything any check needs
// is carried here; immersions without full data are rejected where a
// computation requires it (MissingGysinData).
struct Immersion {
    Space sub, ambient;
    int codim = 0;
    ClsMap restrict_map;   // i^*: A(ambient) -> A(sub)
    ClsMap pushforward;    // i_*: A(sub) -> A(ambient)
    BundleClass normal;    // N_{sub/ambient}, rank = codim, on sub
    Cls cycle_class;       // i_*(1) in A(ambient)
    ImmersionProvenance prov;
};

struct SpaceData {
    int dim = 0;
    SpaceKind kind = SpaceKind::Point;
    std::string label;
    RingPtr ring;  // presented backend; null exactly when blow != null
    std::function<Rational(const GradedElement&)> integral_fn;  // presented backend
    std::shared_ptr<const BlowupData> blow;

    bool is_blowup() const { return blow != nullptr; }
    Rational integral(const Cls& c) const;
};

// Shared data of a blowup space X~ = Bl_Y X.
struct BlowupData {
    Space base;        // X
    Immersion center;  // Y -> X, codim d >= 2
    int d = 0;
    Space exc;         // E = P(N_{Y/X}), a presented projective bundle over Y
    Morphism q;        // E -> Y with fiber integration
    GradedElement zeta;  // c1(O_N(1)) in A(E)
    GradedElement xi;    // c1(O_N(-1)) = -zeta = c1(N_{E/X~})

    // q^*: A(Y) -> A(E)
    GradedElement q_pull(const GradedElement& on_y) const;
    // j_*: A(E) -> A(X~), slot assignment plus the excess overflow rule
    Cls push_from_exc(const GradedElement& on_e, const Space& total) const;
    // j^*: A(X~) -> A(E)
    GradedElement restrict_to_exc(const Cls& on_total) const;
};

// --- constructors ----------------------------------------------------------

Space point();
Space projective_space(int n);  // A(P^n) = Q[h]/(h^{n+1})

// Truncated polynomial ring on the given generators; carries no integral.
Space formal_space(std::vector<Generator> gens, int dim, const std::string& label = "formal");

struct ProjBundleResult {
    Space total;          // P(E)
    Morphism pi;          // P(E) -> X with fiber integration
    GradedElement alpha;  // c1(O_E(1))
};
ProjBundleResult projective_bundle(const Space& X, const BundleClass& E,
                                   const std::string& fiber_gen = "z");

struct ProductP1Result {
    Space total;        // X x P^1
    Morphism pr1;       // projection to X
    GradedElement t;    // hyperplane class of the P^1 factor
    Immersion fiber0;   // X x {0}
    Immersion fiber_pt; // X x {pt}, same data
};
ProductP1Result product_p1(const Space& X);

struct BlowupResult {
    Space total;            // X~
    Morphism p;             // X~ -> X
    Immersion exceptional;  // E -> X~
    Morphism q;             // E -> Y
};
BlowupResult blowup(const Space& X, const Immersion& Y);

// Linear P^k inside P^n with its standard Gysin data.
Immersion sub_linear_space(const Space& Pn, int k);

// Composite immersion Y -> X -> W for a fiber immersion X -> W.
Immersion compose_immersions(const Immersion& outer, const Immersion& inner);

// convenience wrappers
Cls cls(const Space& X, const GradedElement& g);
Cls one(const Space& X);
GradedElement lift_between(const GradedElement& x, const RingPtr& target);

}  // namespace grr
