#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "noisestab/phi.hpp"

namespace noisestab::cube {

/// Point x in {+-1}^n is stored as an index whose bit i is set iff x_{i+1} = +1.
/// Coordinates are 0-based throughout this API; subsets of coordinates are bit masks.
using Point = std::uint32_t;
using CoordMask = std::uint32_t;

inline constexpr int kMaxDimension = 6;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// chi_S(x) = prod_{i in S} x_i.
inline int character(CoordMask s, Point x)
{
    return (__builtin_popcount(s & ~x) & 1) ? -1 : 1;
}

/// {0,1}-valued function on {+-1}^n held as a bit set over the 2^n points.
class BooleanFunction {
public:
    BooleanFunction() = default;
    BooleanFunction(int n, std::uint64_t support_bits);

    static BooleanFunction from_support(int n, std::span<const Point> support);
    /// 1{x_i = +1} (positive) or 1{x_i = -1}.
    static BooleanFunction dictator(int n, int i, bool positive = true);
    static BooleanFunction constant(int n, bool value);

    int n() const { return n_; }
    std::size_t points() const { return std::size_t{1} << n_; }
    std::uint64_t bits() const { return bits_; }
    int operator()(Point x) const { return static_cast<int>((bits_ >> x) & 1u); }
    int weight() const { return __builtin_popcountll(bits_); }
    double mean() const { return static_cast<double>(weight()) / static_cast<double>(points()); }
    bool balanced() const { return 2 * static_cast<std::size_t>(weight()) == points(); }
    std::vector<Point> support() const;

    friend bool operator==(const BooleanFunction&, const BooleanFunction&) = default;

private:
    int n_ = 0;
    std::uint64_t bits_ = 0;
};

/// Real-valued function on {+-1}^n.
struct CubeField {
    int n = 0;
    std::vector<double> values;

    CubeField() = default;
    CubeField(int dim, std::vector<double> vals);
    static CubeField from(const BooleanFunction& f);

    std::size_t points() const { return values.size(); }
    double mean() const;
};

enum class NoiseRoute { kernel, fourier };

/// T_rho f. The kernel route sums P^{n-d} M^d f(y) over all y (d = Hamming distance to x);
/// the Fourier route sums rho^{|S|} fhat_S chi_S(x).
CubeField noise_apply(const BooleanFunction& f, double rho, NoiseRoute route = NoiseRoute::kernel);
CubeField noise_apply(const CubeField& g, double rho);

/// Noise operator acting only on the coordinates in `coords`.
CubeField noise_apply_on(const CubeField& g, double rho, CoordMask coords);

/// All 2^n Fourier coefficients fhat_S = E[f chi_S], indexed by the mask S.
std::vector<double> fourier(const BooleanFunction& f);

/// E[Phi(g)].
double field_phi_mean(const CubeField& g, const bounds::PhiSpec& phi);

/// E[Phi(T_rho f)].
double phi_stability(const BooleanFunction& f, double rho, const bounds::PhiSpec& phi);

/// E[(T_rho f)^q].
double q_moment(const BooleanFunction& f, double rho, double q);

struct DictatorDistance {
    double d;
    double d_tilde;
};

/// mu(A xor {x_i = +1}); computed by counting and by 1/2 - fhat_{i}. Throws std::logic_error if
/// the two disagree.
DictatorDistance dictator_distance(const BooleanFunction& f, int i);

/// min_i d_tilde_i(f).
double min_dictator_distance(const BooleanFunction& f);

/// mu(A and {x_S = a}); `a` is a point mask whose bits outside S are ignored. Computed by counting
/// and by the Fourier sum over T subset S; throws std::logic_error on disagreement.
double subcube_mass(const BooleanFunction& f, CoordMask s, Point a);

/// Coordinates outside `s`, packed: bit j of the result is the j-th free coordinate of x.
Point compress(Point x, CoordMask keep);
Point expand(Point y, CoordMask keep);

/// For each assignment a on S, replaces the restriction x_S = a by the initial segment (in
/// ascending compressed index) of the same size over the free coordinates.
BooleanFunction lex_rearrange(const BooleanFunction& f, CoordMask s);

struct RearrangementBound {
    double lhs;
    double rhs;
};

/// lhs = E[(T_rho f)^q]; rhs = E_{X_S}[ E_{X_{S^c}}[(T^S_rho f*_S)^p]^{q/p} ], p = 1 + (q-1) rho^2.
RearrangementBound check_rearrangement_bound(const BooleanFunction& f, CoordMask s, double rho, double q);

struct RestrictionPair {
    CubeField g_plus;
    CubeField g_minus;
};

/// g_+ = P f_+ + M f_-, g_- = M f_+ + P f_- on the (n-1)-cube of coordinates other than i.
RestrictionPair restrict_and_mix(const BooleanFunction& f, int i, double rho);

/// max over Boolean pairs (phi, f) with mu(f) = alpha, mu(phi) = beta of E[phi T_rho f].
/// alpha 2^n and beta 2^n must be integers; exhaustive, so n <= 4.
double max_noise_stability(int n, double alpha, double beta, double rho);

/// Table S[a][b] = max_noise_stability(n, a/2^n, b/2^n, rho) for all a, b in 0..2^n.
std::vector<std::vector<double>> noise_stability_table(int n, double rho);

} // namespace noisestab::cube
