#include "hullgsa/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "hullgsa/errors.hpp"

namespace hullgsa {

void DesignSpace::validate() const {
    if (lower.empty() || lower.size() != upper.size()) {
        throw ConfigError(fmt::format("design space needs matching, nonempty bounds ({} lower, {} upper)",
                                      lower.size(), upper.size()));
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
            throw ConfigError(fmt::format("bounds of dimension {} must satisfy a < b (got [{}, {}])", i + 1,
                                          lower[i], upper[i]));
        }
    }
}

bool DesignSpace::contains(const Point& x) const {
    if (x.size() != dims()) {
        return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower[i] && x[i] <= upper[i])) {
            return false;
        }
    }
    return true;
}

DesignSpace DesignSpace::hull_default() {
    return box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
}

DesignSpace DesignSpace::box(std::vector<double> lower, std::vector<double> upper) {
    DesignSpace s;
    s.lower = std::move(lower);
    s.upper = std::move(upper);
    s.validate();
    return s;
}

HullParams DesignSpace::hull_at(const Point& x) const {
    if (x.size() != 3) {
        throw DomainError(fmt::format("hull design points have 3 coordinates (got {})", x.size()));
    }
    return fixed.with_shape(x[0], x[1], x[2]);
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// [0, 1) from the top 53 bits; avoids the implementation-defined std distributions
double unit_from(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return unit_from(engine_()); }
    std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * n)); }

private:
    std::mt19937_64 engine_;
};

double inverse_square(const Point& a, const Point& b) {
    double d2 = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
        const double d = a[m] - b[m];
        d2 += d * d;
    }
    return 1.0 / std::max(d2, std::numeric_limits<double>::min());
}

Point normalize(const DesignSpace& space, const Point& x) {
    Point u(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) {
        u[m] = (x[m] - space.lower[m]) / (space.upper[m] - space.lower[m]);
    }
    return u;
}

Point denormalize(const DesignSpace& space, const Point& u) {
    Point x(u.size());
    for (std::size_t m = 0; m < u.size(); ++m) {
        x[m] = std::clamp(space.lower[m] + u[m] * (space.upper[m] - space.lower[m]), space.lower[m], space.upper[m]);
    }
    return x;
}

int cell_of(double u, int levels) {
    return std::clamp(static_cast<int>(std::floor(u * levels)), 0, levels - 1);
}

// Accept-only-improvement search over one batch in normalized coordinates.
class Optimizer {
public:
    Optimizer(std::vector<Point> u, const std::vector<Point>& prior, int levels, const DpsOptions& opt)
        : u_(std::move(u)), prior_(prior), levels_(levels), opt_(opt), dims_(u_.front().size()) {
        occupancy_.assign(dims_, std::vector<int>(levels_, 0));
        for (const Point& p : u_) {
            for (std::size_t m = 0; m < dims_; ++m) {
                ++occupancy_[m][cell_of(p[m], levels_)];
            }
        }
        for (std::size_t i = 0; i < u_.size(); ++i) {
            for (std::size_t j = i + 1; j < u_.size(); ++j) {
                f1_ += inverse_square(u_[i], u_[j]);
            }
            f3_ += repulsion(u_[i]);
        }
        collisions_ = count_collisions();
    }

    double objective() const {
        return (opt_.space_filling ? f1_ : 0.0) + (opt_.non_collapse ? opt_.omega * collisions_ : 0.0) +
               (opt_.repulsion ? f3_ : 0.0);
    }

    void run(long moves, Rng& rng, std::vector<double>* history) {
        const std::size_t n = u_.size();
        enum Move { Jitter, Swap, Relocate };
        for (long it = 0; it < moves; ++it) {
            // free relocation can only help while some cell is shared
            Move kinds[3] = {Jitter, Jitter, Jitter};
            std::size_t count = 1;
            if (n >= 2) {
                kinds[count++] = Swap;
            }
            if (collisions_ > 0) {
                kinds[count++] = Relocate;
            }
            const Move kind = kinds[rng.index(count)];
            const std::size_t i = rng.index(n);
            const std::size_t m = rng.index(dims_);
            bool accepted = false;
            if (kind == Swap) {
                std::size_t j = rng.index(n - 1);
                j += (j >= i) ? 1 : 0;
                accepted = try_swap(i, j, m);
            } else if (kind == Jitter) {
                const int c = cell_of(u_[i][m], levels_);
                accepted = try_move(i, m, (c + rng.uniform()) / levels_);
            } else {
                accepted = try_move(i, m, rng.uniform());
            }
            if (accepted && history) {
                history->push_back(objective());
            }
        }
    }

    const std::vector<Point>& points() const { return u_; }
    double f1() const { return f1_; }
    double f3() const { return f3_; }
    long collisions() const { return collisions_; }

private:
    double repulsion(const Point& x) const {
        double s = 0.0;
        for (const Point& q : prior_) {
            s += inverse_square(x, q);
        }
        return s;
    }

    // sum over batch points other than i and skip
    double attraction(const Point& x, std::size_t i, std::size_t skip) const {
        double s = 0.0;
        for (std::size_t k = 0; k < u_.size(); ++k) {
            if (k != i && k != skip) {
                s += inverse_square(x, u_[k]);
            }
        }
        return s;
    }

    double weighted(double d1, double d2, double d3) const {
        return (opt_.space_filling ? d1 : 0.0) + (opt_.non_collapse ? opt_.omega * d2 : 0.0) +
               (opt_.repulsion ? d3 : 0.0);
    }

    // Exchanging coordinate m leaves every per-axis cell count, and |u_i - u_j|, unchanged.
    bool try_swap(std::size_t i, std::size_t j, std::size_t m) {
        Point a = u_[i];
        Point b = u_[j];
        std::swap(a[m], b[m]);
        const double d1 = attraction(a, i, j) + attraction(b, j, i) - attraction(u_[i], i, j) - attraction(u_[j], j, i);
        const double d3 = prior_.empty() ? 0.0 : repulsion(a) + repulsion(b) - repulsion(u_[i]) - repulsion(u_[j]);
        if (!(weighted(d1, 0.0, d3) < 0.0)) {
            return false;
        }
        u_[i] = std::move(a);
        u_[j] = std::move(b);
        f1_ += d1;
        f3_ += d3;
        return true;
    }

    bool try_move(std::size_t i, std::size_t m, double v) {
        Point a = u_[i];
        a[m] = v;
        const int from = cell_of(u_[i][m], levels_);
        const int to = cell_of(v, levels_);
        const long d2 = (from == to) ? 0 : occupancy_[m][to] - (occupancy_[m][from] - 1);
        const double d1 = attraction(a, i, i) - attraction(u_[i], i, i);
        const double d3 = prior_.empty() ? 0.0 : repulsion(a) - repulsion(u_[i]);
        if (!(weighted(d1, static_cast<double>(d2), d3) < 0.0)) {
            return false;
        }
        --occupancy_[m][from];
        ++occupancy_[m][to];
        u_[i] = std::move(a);
        f1_ += d1;
        f3_ += d3;
        collisions_ += d2;
        return true;
    }

    long count_collisions() const {
        long c = 0;
        for (const auto& axis : occupancy_) {
            for (int k : axis) {
                c += static_cast<long>(k) * (k - 1) / 2;
            }
        }
        return c;
    }

    std::vector<Point> u_;
    const std::vector<Point>& prior_;
    int levels_;
    const DpsOptions& opt_;
    std::size_t dims_;
    std::vector<std::vector<int>> occupancy_;
    double f1_ = 0.0;
    double f3_ = 0.0;
    long collisions_ = 0;
};

// Latin-hypercube start: one point per cell on every axis when N <= levels.
std::vector<Point> latin_start(std::size_t n, std::size_t dims, int levels, Rng& rng) {
    std::vector<Point> u(n, Point(dims));
    std::vector<int> cells(std::max<std::size_t>(n, levels));
    for (std::size_t m = 0; m < dims; ++m) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            cells[k] = static_cast<int>(k % levels);
        }
        for (std::size_t k = cells.size(); k > 1; --k) {
            std::swap(cells[k - 1], cells[rng.index(k)]);
        }
        for (std::size_t j = 0; j < n; ++j) {
            u[j][m] = (cells[j] + rng.uniform()) / levels;
        }
    }
    return u;
}

} // namespace

Point companion_point(const DesignSpace& space, const Point& base, std::size_t j, std::size_t i,
                      std::uint64_t seed) {
    Point x = base;
    const std::uint64_t stream = splitmix(splitmix(seed) ^ (static_cast<std::uint64_t>(j) * 0x100000001B3ull));
    for (std::size_t m = 0; m < x.size(); ++m) {
        if (m == i) {
            continue;
        }
        const double u = unit_from(splitmix(stream ^ (static_cast<std::uint64_t>(i) << 32 | m)));
        x[m] = std::min(space.upper[m], space.lower[m] + u * (space.upper[m] - space.lower[m]));
    }
    return x;
}

SampleSet dps_sample(const DesignSpace& space, std::size_t N, const SampleSet* prior, const DpsOptions& options,
                     std::uint64_t seed) {
    space.validate();
    const bool has_prior = prior && !prior->base.empty();
    if (N < 2 && !(has_prior && N == 1)) {
        throw ConfigError(fmt::format("DPS needs at least 2 samples (got {})", N));
    }
    if (options.restarts < 1 || options.iterations_per_point < 0 || options.grid_levels < 0 ||
        !(options.omega >= 0.0)) {
        throw ConfigError("DPS options: restarts >= 1, iterations >= 0, grid levels >= 0 and omega >= 0 required");
    }
    const std::size_t dims = space.dims();
    SampleSet set = prior ? *prior : SampleSet{};
    if (!prior) {
        set.seed = seed;
        set.companions.assign(dims, {});
    } else if (set.dims() != dims) {
        throw ConfigError("prior sample set lives in a different design space");
    }

    std::vector<Point> prior_u;
    prior_u.reserve(set.base.size());
    for (const Point& x : set.base) {
        prior_u.push_back(normalize(space, x));
    }
    const int levels = options.grid_levels > 0 ? options.grid_levels : static_cast<int>(N);
    const std::uint64_t batch_seed = splitmix(seed ^ splitmix(set.base.size() + 1));
    const long moves = static_cast<long>(options.iterations_per_point) * static_cast<long>(N);

    DpsDiagnostics diag;
    std::vector<Point> best;
    double best_objective = std::numeric_limits<double>::infinity();
    const int restarts = options.initial.empty() ? options.restarts : 1;
    for (int r = 0; r < restarts; ++r) {
        Rng rng(splitmix(batch_seed + static_cast<std::uint64_t>(r)));
        std::vector<Point> start;
        if (!options.initial.empty()) {
            if (options.initial.size() != N) {
                throw ConfigError(fmt::format("initial design has {} points, expected {}", options.initial.size(), N));
            }
            for (const Point& x : options.initial) {
                if (!space.contains(x)) {
                    throw ConfigError("initial design point outside the design space");
                }
                start.push_back(normalize(space, x));
            }
        } else {
            start = latin_start(N, dims, levels, rng);
        }
        Optimizer opt(std::move(start), prior_u, levels, options);
        std::vector<double> history;
        if (options.record_history) {
            history.push_back(opt.objective());
        }
        opt.run(moves, rng, options.record_history ? &history : nullptr);
        if (opt.objective() < best_objective) {
            best_objective = opt.objective();
            best = opt.points();
            diag.f1 = opt.f1();
            diag.f2 = options.omega * static_cast<double>(opt.collisions());
            diag.f3 = opt.f3();
            diag.collisions = opt.collisions();
            diag.history = std::move(history);
        }
    }
    diag.grid_capacity_exceeded = N > static_cast<std::size_t>(levels);

    for (const Point& u : best) {
        const std::size_t j = set.base.size();
        set.base.push_back(denormalize(space, u));
        for (std::size_t i = 0; i < dims; ++i) {
            set.companions[i].push_back(companion_point(space, set.base.back(), j, i, set.seed));
        }
    }
    set.diagnostics = std::move(diag);
    return set;
}

double space_filling_energy(const DesignSpace& space, const std::vector<Point>& points) {
    double f = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point a = normalize(space, points[i]);
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            f += inverse_square(a, normalize(space, points[j]));
        }
    }
    return f;
}

long grid_collisions(const DesignSpace& space, const std::vector<Point>& points, int levels) {
    if (levels < 1) {
        throw DomainError("grid levels must be positive");
    }
    long c = 0;
    for (std::size_t m = 0; m < space.dims(); ++m) {
        std::vector<long> occupancy(levels, 0);
        for (const Point& x : points) {
            ++occupancy[cell_of((x[m] - space.lower[m]) / (space.upper[m] - space.lower[m]), levels)];
        }
        for (long k : occupancy) {
            c += k * (k - 1) / 2;
        }
    }
    return c;
}

} // namespace hullgsa
