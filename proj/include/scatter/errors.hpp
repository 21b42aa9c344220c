#pragma once

#include <stdexcept>
#include <string>

namespace scatter {

// Failure kinds. The CLI maps them onto exit codes:
//   config -> 2, exhaustion -> 3, precision -> 4, budget -> 5,
// anything else (internal invariant breach) -> 1.
enum class errc {
    config,      // invalid parameters, malformed input, unsupported combination
    exhaustion,  // node provider ran out of candidates
    precision,   // residual still bad at the precision retry cap
    budget,      // degree cap or doubling cap hit before the error budget was met
    singular,    // linear system has no unique solution (duplicate nodes, ...)
    internal,    // "cannot happen" invariant failed
};

class error : public std::runtime_error {
  public:
    error(errc kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    errc kind() const { return kind_; }

    // optional numeric payload (e.g. best error achieved when a cap is hit)
    error& with_detail(double v) {
        detail_ = v;
        has_detail_ = true;
        return *this;
    }
    bool has_detail() const { return has_detail_; }
    double detail() const { return detail_; }

    static int exit_code(errc k) {
        switch (k) {
        case errc::config: return 2;
        case errc::exhaustion: return 3;
        case errc::precision: return 4;
        case errc::budget: return 5;
        default: return 1;
        }
    }

  private:
    errc kind_;
    double detail_ = 0.0;
    bool has_detail_ = false;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) { throw error(kind, msg); }

inline void require(bool cond, errc kind, const std::string& msg) {
    if (!cond) fail(kind, msg);
}

} // namespace scatter
