#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cfint/operators.hpp"

namespace cfint {

// Runtime configuration of a batch experiment.  Built-in defaults are
// overlaid by a key=value config file and then by command-line flags; every
// override funnels through apply_override so the two sources cannot drift.
struct ExperimentConfig {
  std::string domain;           // "", "ball[:n]", "ellipsoid[:a1,a2,..]", "model1", "model2[:n]"
  std::string kernel = "all";   // "bm" | "cl" | "levi" | "all"
  std::vector<int> res;         // polar counts, azimuthal = 2*polar; empty = command default
  std::vector<Real> deltas;     // interior offsets; empty = 0.5*sqrt(h) per step
  Real eps = -1.0;              // glued-kernel cutoff overrides; < 0 = derived
  Real eps0 = -1.0;
  int points = 0;               // seeded sample count; 0 = command default
  std::uint64_t seed = 1;
  std::string out;              // CSV path; empty = stdout
  std::map<std::string, Real> tolerances;  // gate overrides by name
};

// One key=value override (the config-file line and flag syntax).  Unknown
// keys or malformed values throw std::invalid_argument.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Plain-text config: one key=value per line, '#' comments, blank lines
// ignored.  Unreadable files throw std::runtime_error.
ExperimentConfig load_config(const std::string& path);

// Schedules must be nonempty and strictly increasing once defaults are
// resolved; violations throw std::invalid_argument.
void validate_config(const ExperimentConfig& cfg);

// Gate tolerance by name: explicit override wins, else the built-in default.
Real gate_tolerance(const ExperimentConfig& cfg, const std::string& name);

// Built-in domains selectable by CLI name.
Domain domain_by_name(const std::string& name);

// One CSV row.  Numeric columns are pre-formatted ("%.12g") so a fixed
// config+seed reproduces the file byte for byte; "na" marks columns that do
// not apply.  pass is "1", "0", or "na" for ungated (informational) rows.
struct ReportRow {
  std::string domain;
  std::string kernel;
  std::string resolution;
  std::string delta;
  std::string quantity;
  std::string value;
  std::string tolerance;
  std::string pass;
};

struct Report {
  std::vector<ReportRow> rows;
};

// True when no gated row failed.
bool report_passes(const Report& r);

std::string csv_header();
void write_csv(const Report& r, std::ostream& out);

// Subcommand drivers; see the README for the rows each one emits.
Report cmd_diagnose(const ExperimentConfig& cfg);
Report cmd_identities(const ExperimentConfig& cfg);
Report cmd_kernels(const ExperimentConfig& cfg);
Report cmd_reproduce(const ExperimentConfig& cfg);
Report cmd_szego(const ExperimentConfig& cfg);

// ---- building blocks shared with the acceptance harness ----------------

// Pointwise form-identity residuals, maximized over seeded configurations.
// Each returns the worst sup-norm deviation observed.

// Scaling law of the Cauchy-Fantappie constructor: cf0(g eta) = g^n cf0(eta)
// for a smooth scalar g and the Bochner-Martinelli field.
Real cf_scaling_residual(int n, int points, std::uint64_t seed);

// Degeneracy of generating forms: (dbar_w eta)^n = 0.  field is "bm" (free
// points) or "cl" (the Leray field of the unit ball, w on the sphere).
Real generating_degeneracy_residual(int n, const std::string& field, int points,
                                    std::uint64_t seed);

// Closed form of the Bochner-Martinelli CF form via the Hodge star:
// cf0(partial_w beta) = ((n-1)!/(2 pi^n)) * star(partial_w beta).
Real bm_hodge_residual(int n, int points, std::uint64_t seed);

// Transgression between the two CF forms: dbar_z cf0(eta) = -d_w cf1(eta),
// outer derivatives by central differences; n = 2.
Real transgression_residual(int points, std::uint64_t seed);

// Surface-measure identity on the unit sphere: the pullback density of
// 2 * star(partial rho) / |d rho| equals 1.
Real surface_measure_residual(int n, int points, std::uint64_t seed);

// Ball closed-form agreements, max relative deviation over seeded pairs.
Real max_rel_cl_vs_szego(int n, int pairs, std::uint64_t seed);
Real max_rel_bergman_leray(const Domain& ball_like, int n, int pairs, std::uint64_t seed,
                           Real radius = 0.7);

// Finite-difference dbar_z residuals of a boundary density at seeded
// interior targets; returns the smallest and largest per-point residual so
// callers can gate holomorphy (max) and non-holomorphy (min) alike.
struct HolomorphyProbe {
  Real min_residual = 0.0;
  Real max_residual = 0.0;
};

HolomorphyProbe holomorphy_probe(const Domain& d, const BoundaryKernelDensity& density,
                                 int points, std::uint64_t seed);

// One Kerzman-Stein run; delta < 0 selects the pinned offset 0.5*sqrt(h).
struct SzegoRun {
  int polar = 0, azimuthal = 0;
  std::size_t nodes = 0;
  Real delta = 0.0;
  SzegoResult ks;
  Real s_minus_c_rel = 0.0;  // ||S - C|| / ||C|| on l^2(mu)
};

SzegoRun run_szego(const Domain& d, int polar, int azimuthal, Real delta = -1.0);

}  // namespace cfint
