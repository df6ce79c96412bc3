#include "noisestab/cube.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace noisestab::cube {

namespace {

void check_dimension(int n, int cap = kMaxDimension)
{
    if (n < 0 || n > cap)
        throw DimensionError("cube dimension " + std::to_string(n) + " outside [0, " + std::to_string(cap) + "]");
}

void check_rho(double rho)
{
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("rho must lie in [0,1]");
}

void check_coord(int n, int i)
{
    if (i < 0 || i >= n)
        throw std::out_of_range("coordinate " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
}

CoordMask full_mask(int n) { return n == 0 ? 0u : static_cast<CoordMask>((std::uint64_t{1} << n) - 1); }

std::vector<double> kernel_weights(int n, double rho)
{
    const double p = 0.5 * (1.0 + rho);
    const double m = 0.5 * (1.0 - rho);
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    for (int d = 0; d <= n; ++d)
        w[static_cast<std::size_t>(d)] = std::pow(p, n - d) * std::pow(m, d);
    return w;
}

// Calls visit(a) for every submask a of s, starting from 0.
template <class F>
void for_each_submask(CoordMask s, F&& visit)
{
    CoordMask a = 0;
    do {
        visit(a);
        a = (a - s) & s;
    } while (a != 0);
}

} // namespace

BooleanFunction::BooleanFunction(int n, std::uint64_t support_bits) : n_(n), bits_(support_bits)
{
    check_dimension(n);
    if (n < kMaxDimension && (support_bits >> (std::uint64_t{1} << n)) != 0)
        throw std::invalid_argument("support index beyond 2^n");
}

BooleanFunction BooleanFunction::from_support(int n, std::span<const Point> support)
{
    check_dimension(n);
    std::uint64_t bits = 0;
    for (Point x : support) {
        if (x >= (std::uint64_t{1} << n))
            throw std::invalid_argument("support index " + std::to_string(x) + " beyond 2^n");
        bits |= std::uint64_t{1} << x;
    }
    return BooleanFunction(n, bits);
}

BooleanFunction BooleanFunction::dictator(int n, int i, bool positive)
{
    check_dimension(n);
    check_coord(n, i);
    std::uint64_t bits = 0;
    for (Point x = 0; x < (Point{1} << n); ++x)
        if (((x >> i) & 1u) == (positive ? 1u : 0u))
            bits |= std::uint64_t{1} << x;
    return BooleanFunction(n, bits);
}

BooleanFunction BooleanFunction::constant(int n, bool value)
{
    check_dimension(n);
    if (!value)
        return BooleanFunction(n, 0);
    const std::size_t pts = std::size_t{1} << n;
    return BooleanFunction(n, pts == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << pts) - 1);
}

std::vector<Point> BooleanFunction::support() const
{
    std::vector<Point> out;
    for (Point x = 0; x < points(); ++x)
        if ((*this)(x))
            out.push_back(x);
    return out;
}

CubeField::CubeField(int dim, std::vector<double> vals) : n(dim), values(std::move(vals))
{
    check_dimension(dim);
    if (values.size() != (std::size_t{1} << dim))
        throw std::invalid_argument("field needs 2^n values");
}

CubeField CubeField::from(const BooleanFunction& f)
{
    std::vector<double> v(f.points());
    for (Point x = 0; x < f.points(); ++x)
        v[x] = f(x);
    return CubeField(f.n(), std::move(v));
}

double CubeField::mean() const
{
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::vector<double> fourier(const BooleanFunction& f)
{
    const std::size_t pts = f.points();
    std::vector<double> h(pts);
    for (Point x = 0; x < pts; ++x)
        h[x] = f(x);
    // In-place Walsh-Hadamard: h[S] = sum_x f(x) (-1)^{|S & x|}.
    for (std::size_t len = 1; len < pts; len <<= 1)
        for (std::size_t i = 0; i < pts; i += len << 1)
            for (std::size_t j = i; j < i + len; ++j) {
                const double u = h[j];
                const double v = h[j + len];
                h[j] = u + v;
                h[j + len] = u - v;
            }
    const double scale = 1.0 / static_cast<double>(pts);
    for (CoordMask s = 0; s < pts; ++s) {
        const double sign = (__builtin_popcount(s) & 1) ? -1.0 : 1.0;
        h[s] *= sign * scale;
    }
    return h;
}

CubeField noise_apply(const CubeField& g, double rho)
{
    check_rho(rho);
    const auto w = kernel_weights(g.n, rho);
    const std::size_t pts = g.points();
    std::vector<double> out(pts, 0.0);
    for (Point x = 0; x < pts; ++x) {
        double sum = 0.0;
        for (Point y = 0; y < pts; ++y)
            sum += w[static_cast<std::size_t>(__builtin_popcount(x ^ y))] * g.values[y];
        out[x] = sum;
    }
    return CubeField(g.n, std::move(out));
}

CubeField noise_apply(const BooleanFunction& f, double rho, NoiseRoute route)
{
    check_rho(rho);
    if (route == NoiseRoute::kernel)
        return noise_apply(CubeField::from(f), rho);
    const auto coeffs = fourier(f);
    const std::size_t pts = f.points();
    std::vector<double> damp(static_cast<std::size_t>(f.n()) + 1, 1.0);
    for (std::size_t k = 1; k < damp.size(); ++k)
        damp[k] = damp[k - 1] * rho;
    std::vector<double> out(pts, 0.0);
    for (Point x = 0; x < pts; ++x) {
        double sum = 0.0;
        for (CoordMask s = 0; s < pts; ++s)
            sum += damp[static_cast<std::size_t>(__builtin_popcount(s))] * coeffs[s] * character(s, x);
        out[x] = sum;
    }
    return CubeField(f.n(), std::move(out));
}

CubeField noise_apply_on(const CubeField& g, double rho, CoordMask coords)
{
    check_rho(rho);
    if ((coords & ~full_mask(g.n)) != 0)
        throw std::invalid_argument("coordinate mask beyond n");
    const double p = 0.5 * (1.0 + rho);
    const double m = 0.5 * (1.0 - rho);
    std::vector<double> cur = g.values;
    std::vector<double> next(cur.size());
    for (int i = 0; i < g.n; ++i) {
        if (!((coords >> i) & 1u))
            continue;
        const Point bit = Point{1} << i;
        for (Point x = 0; x < cur.size(); ++x)
            next[x] = p * cur[x] + m * cur[x ^ bit];
        cur.swap(next);
    }
    return CubeField(g.n, std::move(cur));
}

double field_phi_mean(const CubeField& g, const bounds::PhiSpec& phi)
{
    double sum = 0.0;
    for (double v : g.values)
        sum += phi(v);
    return sum / static_cast<double>(g.points());
}

double phi_stability(const BooleanFunction& f, double rho, const bounds::PhiSpec& phi)
{
    return field_phi_mean(noise_apply(f, rho), phi);
}

double q_moment(const BooleanFunction& f, double rho, double q)
{
    const auto g = noise_apply(f, rho);
    double sum = 0.0;
    for (double v : g.values)
        sum += std::pow(v, q);
    return sum / static_cast<double>(g.points());
}

DictatorDistance dictator_distance(const BooleanFunction& f, int i)
{
    check_coord(f.n(), i);
    const auto dict = BooleanFunction::dictator(f.n(), i, true);
    const double pts = static_cast<double>(f.points());
    const double by_count = __builtin_popcountll(f.bits() ^ dict.bits()) / pts;
    double fhat = 0.0;
    for (Point x = 0; x < f.points(); ++x)
        fhat += f(x) * character(CoordMask{1} << i, x);
    const double by_fourier = 0.5 - fhat / pts;
    if (by_count != by_fourier)
        throw std::logic_error("dictator distance: count and Fourier routes disagree");
    return {by_count, std::min(by_count, 1.0 - by_count)};
}

double min_dictator_distance(const BooleanFunction& f)
{
    double best = 1.0;
    for (int i = 0; i < f.n(); ++i)
        best = std::min(best, dictator_distance(f, i).d_tilde);
    return best;
}

double subcube_mass(const BooleanFunction& f, CoordMask s, Point a)
{
    if ((s & ~full_mask(f.n())) != 0)
        throw std::invalid_argument("coordinate mask beyond n");
    a &= s;
    const double pts = static_cast<double>(f.points());
    int count = 0;
    for (Point x = 0; x < f.points(); ++x)
        if ((x & s) == a && f(x))
            ++count;
    const double by_count = count / pts;

    const auto coeffs = fourier(f);
    double sum = 0.0;
    for_each_submask(s, [&](CoordMask t) { sum += character(t, a) * coeffs[t]; });
    const double by_fourier = sum / static_cast<double>(Point{1} << __builtin_popcount(s));
    if (by_count != by_fourier)
        throw std::logic_error("subcube mass: count and Fourier routes disagree");
    return by_count;
}

Point compress(Point x, CoordMask keep)
{
    Point out = 0;
    int j = 0;
    for (int i = 0; keep >> i; ++i)
        if ((keep >> i) & 1u)
            out |= ((x >> i) & 1u) << j++;
    return out;
}

Point expand(Point y, CoordMask keep)
{
    Point out = 0;
    int j = 0;
    for (int i = 0; keep >> i; ++i)
        if ((keep >> i) & 1u)
            out |= ((y >> j++) & 1u) << i;
    return out;
}

BooleanFunction lex_rearrange(const BooleanFunction& f, CoordMask s)
{
    const CoordMask all = full_mask(f.n());
    if ((s & ~all) != 0)
        throw std::invalid_argument("coordinate mask beyond n");
    const CoordMask free = all & ~s;
    const Point free_points = Point{1} << __builtin_popcount(free);
    std::uint64_t bits = 0;
    for_each_submask(s, [&](Point a) {
        Point ones = 0;
        for (Point y = 0; y < free_points; ++y)
            ones += static_cast<Point>(f(a | expand(y, free)));
        for (Point y = 0; y < ones; ++y)
            bits |= std::uint64_t{1} << (a | expand(y, free));
    });
    return BooleanFunction(f.n(), bits);
}

RearrangementBound check_rearrangement_bound(const BooleanFunction& f, CoordMask s, double rho, double q)
{
    if (!(q > 1.0))
        throw std::domain_error("rearrangement bound needs q > 1");
    const double lhs = q_moment(f, rho, q);
    const auto star = lex_rearrange(f, s);
    const auto h = noise_apply_on(CubeField::from(star), rho, s);
    const double p = 1.0 + (q - 1.0) * rho * rho;
    const CoordMask free = full_mask(f.n()) & ~s;
    const Point free_points = Point{1} << __builtin_popcount(free);
    double rhs = 0.0;
    for_each_submask(s, [&](Point a) {
        double inner = 0.0;
        for (Point y = 0; y < free_points; ++y)
            inner += std::pow(h.values[a | expand(y, free)], p);
        inner /= static_cast<double>(free_points);
        rhs += std::pow(inner, q / p);
    });
    rhs /= static_cast<double>(Point{1} << __builtin_popcount(s));
    return {lhs, rhs};
}

RestrictionPair restrict_and_mix(const BooleanFunction& f, int i, double rho)
{
    check_coord(f.n(), i);
    check_rho(rho);
    const double p = 0.5 * (1.0 + rho);
    const double m = 0.5 * (1.0 - rho);
    const CoordMask keep = full_mask(f.n()) & ~(CoordMask{1} << i);
    const std::size_t half = f.points() / 2;
    std::vector<double> plus(half);
    std::vector<double> minus(half);
    for (Point y = 0; y < half; ++y) {
        const Point lo = expand(y, keep);
        const double fp = f(lo | (Point{1} << i));
        const double fm = f(lo);
        plus[y] = p * fp + m * fm;
        minus[y] = m * fp + p * fm;
    }
    return {CubeField(f.n() - 1, std::move(plus)), CubeField(f.n() - 1, std::move(minus))};
}

std::vector<std::vector<double>> noise_stability_table(int n, double rho)
{
    check_dimension(n, 4);
    check_rho(rho);
    const std::size_t pts = std::size_t{1} << n;
    const auto w = kernel_weights(n, rho);
    std::vector<std::vector<double>> table(pts + 1, std::vector<double>(pts + 1, 0.0));
    std::vector<double> tf(pts);
    const std::uint64_t count = std::uint64_t{1} << pts;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        for (Point x = 0; x < pts; ++x) {
            double sum = 0.0;
            for (Point y = 0; y < pts; ++y)
                if ((bits >> y) & 1u)
                    sum += w[static_cast<std::size_t>(__builtin_popcount(x ^ y))];
            tf[x] = sum;
        }
        std::sort(tf.begin(), tf.end(), std::greater<>());
        auto& row = table[static_cast<std::size_t>(__builtin_popcountll(bits))];
        double partial = 0.0;
        for (std::size_t b = 1; b <= pts; ++b) {
            partial += tf[b - 1];
            row[b] = std::max(row[b], partial / static_cast<double>(pts));
        }
    }
    return table;
}

double max_noise_stability(int n, double alpha, double beta, double rho)
{
    check_dimension(n, 4);
    const double pts = static_cast<double>(std::size_t{1} << n);
    auto to_count = [pts](double v, const char* what) {
        const double c = v * pts;
        if (!(v >= 0.0 && v <= 1.0) || std::abs(c - std::round(c)) > 1e-12)
            throw std::invalid_argument(std::string(what) + " must be a multiple of 2^-n in [0,1]");
        return static_cast<std::size_t>(std::llround(c));
    };
    const auto a = to_count(alpha, "alpha");
    const auto b = to_count(beta, "beta");
    return noise_stability_table(n, rho)[a][b];
}

} // namespace noisestab::cube
