#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rational.hpp"

namespace scatter {

enum class Sign { positive, negative };

inline const char* sign_name(Sign s) { return s == Sign::positive ? "positive" : "negative"; }

inline uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Node provider: an unbounded (unless explicit and unextended) strictly
// increasing family of exact rational nodes indexed by the integers.
// Four kinds:
//   integers      : node(i) = i
//   jittered      : node(i) = i + amplitude * u_i, u_i deterministic in [-1, 1)
//   explicit_list : finite sorted list, optional affine continuation past both ends
//   affine        : node(i) = offset + i * step, step > 0
class Provider {
  public:
    enum class Kind { integers, jittered, explicit_list, affine };

    static Provider integers() { return Provider(Kind::integers); }

    static Provider jittered(const Rat& amplitude, uint64_t seed) {
        require(amplitude >= 0 && amplitude < Rat(1, 3), errc::config,
                "jitter amplitude must lie in [0, 1/3)");
        Provider p(Kind::jittered);
        p.amp_ = amplitude;
        p.seed_ = seed;
        return p;
    }

    static Provider explicit_list(std::vector<Rat> nodes, std::optional<Rat> delta = {},
                                  std::optional<Rat> extension_step = {}) {
        require(!nodes.empty(), errc::config, "explicit node list is empty");
        for (size_t i = 1; i < nodes.size(); ++i)
            require(nodes[i - 1] < nodes[i], errc::config,
                    "explicit node list must be strictly increasing");
        if (extension_step)
            require(*extension_step > 0, errc::config, "extension step must be positive");
        Provider p(Kind::explicit_list);
        p.list_ = std::move(nodes);
        p.delta_ = std::move(delta);
        p.step_ = extension_step.value_or(Rat(0));
        p.extended_ = extension_step.has_value();
        return p;
    }

    static Provider affine(const Rat& step, const Rat& offset) {
        require(step > 0, errc::config, "lattice step must be positive");
        Provider p(Kind::affine);
        p.step_ = step;
        p.offset_ = offset;
        return p;
    }

    Kind kind() const { return kind_; }

    // advertised minimum gap between consecutive nodes
    Rat delta() const {
        switch (kind_) {
        case Kind::integers: return Rat(1);
        case Kind::jittered: return Rat(1) - 2 * amp_;
        case Kind::affine: return step_;
        case Kind::explicit_list: {
            if (delta_) return *delta_;
            Rat best(0);
            bool any = false;
            for (size_t i = 1; i < list_.size(); ++i) {
                Rat gap = list_[i] - list_[i - 1];
                if (!any || gap < best) best = gap, any = true;
            }
            if (extended_ && (!any || step_ < best)) best = step_, any = true;
            return any ? best : Rat(1); // singleton: vacuous
        }
        }
        return Rat(1);
    }

    Rat node(long long index) const {
        switch (kind_) {
        case Kind::integers: return Rat(static_cast<long>(index));
        case Kind::jittered: return Rat(static_cast<long>(index)) + amp_ * jitter_unit(index);
        case Kind::affine: return offset_ + Rat(static_cast<long>(index)) * step_;
        case Kind::explicit_list: {
            long long n = static_cast<long long>(list_.size());
            if (index >= 0 && index < n) return list_[static_cast<size_t>(index)];
            require(extended_, errc::exhaustion, "explicit node list exhausted");
            if (index < 0) return list_.front() + Rat(static_cast<long>(index)) * step_;
            return list_.back() + Rat(static_cast<long>(index - n + 1)) * step_;
        }
        }
        fail(errc::internal, "bad provider kind");
    }

    // smallest node strictly greater than m
    Rat first_above(const Rat& m) const {
        switch (kind_) {
        case Kind::integers: return Rat(rat_floor(m) + 1);
        case Kind::jittered: {
            Int j0 = rat_floor(m - amp_);
            require(j0.fits_slong_p(), errc::exhaustion, "jittered index out of range");
            long long j = j0.get_si();
            while (node(j) <= m) ++j;
            return node(j);
        }
        case Kind::affine: {
            // least i with offset + i*step > m
            Int i = rat_floor((m - offset_) / step_) + 1;
            require(i.fits_slong_p(), errc::exhaustion, "lattice index out of range");
            return node(i.get_si());
        }
        case Kind::explicit_list: {
            for (const Rat& v : list_)
                if (v > m) return v;
            require(extended_, errc::exhaustion,
                    "explicit node list exhausted above " + m.get_str());
            Int k = rat_floor((m - list_.back()) / step_) + 1;
            if (k < 1) k = 1;
            return list_.back() + Rat(k) * step_;
        }
        }
        fail(errc::internal, "bad provider kind");
    }

    // largest node strictly less than m
    Rat first_below(const Rat& m) const {
        switch (kind_) {
        case Kind::integers: return Rat(rat_ceil(m) - 1);
        case Kind::jittered: {
            Int j0 = rat_ceil(m + amp_);
            require(j0.fits_slong_p(), errc::exhaustion, "jittered index out of range");
            long long j = j0.get_si();
            while (node(j) >= m) --j;
            return node(j);
        }
        case Kind::affine: {
            Int i = rat_ceil((m - offset_) / step_) - 1;
            require(i.fits_slong_p(), errc::exhaustion, "lattice index out of range");
            return node(i.get_si());
        }
        case Kind::explicit_list: {
            for (size_t i = list_.size(); i-- > 0;)
                if (list_[i] < m) return list_[i];
            require(extended_, errc::exhaustion,
                    "explicit node list exhausted below " + m.get_str());
            Int k = rat_ceil((list_.front() - m) / step_) + 1;
            if (k < 1) k = 1;
            return list_.front() - Rat(k) * step_;
        }
        }
        fail(errc::internal, "bad provider kind");
    }

  private:
    explicit Provider(Kind k) : kind_(k) {}

    // deterministic unit jitter in [-1, 1): dyadic rational from 53 hash bits
    Rat jitter_unit(long long index) const {
        uint64_t h = splitmix64(seed_ ^ splitmix64(static_cast<uint64_t>(index)));
        uint64_t u53 = h >> 11;
        Int num = Int(2) * Int(static_cast<unsigned long>(u53)) - (Int(1) << 53);
        Rat r(num, Int(1) << 53);
        r.canonicalize();
        return r;
    }

    Kind kind_;
    Rat amp_;
    uint64_t seed_ = 0;
    std::vector<Rat> list_;
    std::optional<Rat> delta_;
    Rat step_;
    Rat offset_;
    bool extended_ = false;
};

// Verifies strict monotonicity and the advertised separation over an index
// window; returns the smallest gap seen.
inline Rat verify_separation(const Provider& p, long long lo, long long hi) {
    require(lo < hi, errc::config, "separation window needs at least two indices");
    Rat best;
    bool any = false;
    Rat prev = p.node(lo);
    for (long long i = lo + 1; i <= hi; ++i) {
        Rat cur = p.node(i);
        Rat gap = cur - prev;
        require(gap > 0, errc::config,
                "provider emitted non-increasing nodes at " + prev.get_str() + ", " + cur.get_str());
        require(gap >= p.delta(), errc::config,
                "separation violated by pair (" + prev.get_str() + ", " + cur.get_str() + "): gap " +
                    gap.get_str() + " < " + p.delta().get_str());
        if (!any || gap < best) best = gap, any = true;
        prev = cur;
    }
    return best;
}

// |prod_{j != i} (1 - y_i / y_j)|^{-1}, exact. Nodes must be distinct and nonzero.
inline Rat gap_product_exact(const std::vector<Rat>& nodes, size_t i) {
    require(i < nodes.size(), errc::config, "gap product index out of range");
    Rat prod(1);
    for (size_t j = 0; j < nodes.size(); ++j) {
        if (j == i) continue;
        require(nodes[j] != 0, errc::config, "gap product undefined for zero node");
        Rat f = 1 - nodes[i] / nodes[j];
        require(f != 0, errc::singular, "duplicate nodes in gap product");
        prod *= f;
    }
    return rat_abs(1 / prod);
}

// A doubling sequence: nodes of one sign, magnitude at least doubling at each
// step. Carries its (exact) gap products; each is provably at most 4.
struct DoublingSequence {
    Sign sign = Sign::positive;
    std::vector<Rat> nodes;        // |y_1| < |y_2| < ...
    std::vector<Rat> gap_products; // gap_products[i] corresponds to nodes[i]

    size_t size() const { return nodes.size(); }

    static DoublingSequence build(Sign sign, std::vector<Rat> nodes) {
        require(!nodes.empty(), errc::config, "doubling sequence must be nonempty");
        for (const Rat& y : nodes) {
            bool ok = sign == Sign::positive ? y > 0 : y < 0;
            require(ok, errc::config, std::string("node of wrong sign for ") + sign_name(sign) +
                                          " sequence: " + y.get_str());
        }
        for (size_t j = 1; j < nodes.size(); ++j) {
            bool ok = sign == Sign::positive ? nodes[j] >= 2 * nodes[j - 1]
                                             : nodes[j] <= 2 * nodes[j - 1];
            require(ok, errc::config, "doubling violated between " + nodes[j - 1].get_str() +
                                          " and " + nodes[j].get_str());
        }
        DoublingSequence d;
        d.sign = sign;
        d.nodes = std::move(nodes);
        d.gap_products.reserve(d.nodes.size());
        for (size_t i = 0; i < d.nodes.size(); ++i) {
            Rat g = gap_product_exact(d.nodes, i);
            // theorem: the doubling structure forces this bound
            require(g <= 4, errc::internal, "gap product exceeds 4 on a doubling sequence");
            d.gap_products.push_back(std::move(g));
        }
        return d;
    }
};

// Greedy extraction: first node beyond the threshold, then repeatedly the
// first node beyond twice the last. Strict inequalities throughout.
inline DoublingSequence extract_doubling(const Provider& p, Sign sign, const Rat& threshold,
                                         size_t count) {
    require(threshold >= 0, errc::config, "extraction threshold must be nonnegative");
    require(count >= 1, errc::config, "extraction count must be at least 1");
    std::vector<Rat> nodes;
    nodes.reserve(count);
    if (sign == Sign::positive) {
        Rat y = p.first_above(threshold);
        require(y > 0, errc::exhaustion, "no positive node above threshold");
        nodes.push_back(y);
        while (nodes.size() < count) nodes.push_back(p.first_above(2 * nodes.back()));
    } else {
        Rat y = p.first_below(-threshold);
        require(y < 0, errc::exhaustion, "no negative node below threshold");
        nodes.push_back(y);
        while (nodes.size() < count) nodes.push_back(p.first_below(2 * nodes.back()));
    }
    return DoublingSequence::build(sign, std::move(nodes));
}

} // namespace scatter
