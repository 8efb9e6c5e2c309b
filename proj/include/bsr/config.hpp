#ifndef BSR_CONFIG_HPP
#define BSR_CONFIG_HPP

#include <string>
#include <vector>

#include "bsr/model.hpp"
#include "bsr/stepper.hpp"

namespace bsr {

/// Carries every violation found in a config, not just the first.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> violations_)
        : std::runtime_error(join(violations_)),
          violations(std::move(violations_)) {}
    std::vector<std::string> violations;

  private:
    static std::string join(const std::vector<std::string>& v);
};

struct GeometryConfig {
    GeomKind kind = GeomKind::Interval;
    int n = 128;        // interval cells
    int n_r = 32;       // disk radial cells
    int n_theta = 64;   // disk angular cells
};

struct InitialConfig {
    // Either a named preset or a pair of inline expressions. Expression
    // variables: x, y, r, theta (interval exposes x only).
    std::string preset = "compatible-positive";
    std::string u_expr, v_expr;
};

struct ExperimentConfig {
    std::vector<double> eps_list;
    std::vector<double> delta_list;
    std::vector<int> mms_levels = {32, 64, 128};
    int galerkin_modes = 32;
};

struct RunConfig {
    GeometryConfig geometry;
    ModelParams model;
    int trace_order = 2;
    TimeStepperConfig time;
    InitialConfig initial;
    ExperimentConfig experiment;
};

/// Parses and fully validates a JSON config; unknown keys are rejected
/// and every violation is reported with its field path.
RunConfig parse_config(const std::string& text);

/// Convenience: read the file then parse.
RunConfig load_config(const std::string& path);

Geometry build_geometry(const GeometryConfig& g);

/// Initial data from a preset or from inline expressions, evaluated at
/// the quadrature nodes. Presets:
///   equilibrium          u = 1, v = 1
///   compatible-positive  smooth strictly positive u with v matching
///                        the boundary trace of u
///   incompatible-jump    u = 1, v = 0
///   linear-L2            nonnegative but not strictly positive data
StatePair make_initial(const InitialConfig& ic, const Geometry& geom,
                       const DiscreteOperators& ops);

} // namespace bsr

#endif
