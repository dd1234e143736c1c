#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sandlab/budget.hpp"
#include "sandlab/ca_engine.hpp"
#include "sandlab/configuration.hpp"
#include "sandlab/rule_program.hpp"
#include "sandlab/sa_rule.hpp"

namespace sandlab {

// ---- rule DSL (sarule v1) ----

/// Throws ParseError with the 1-based line and column of the offending token.
RuleProgram parse_rule(std::string_view text);
/// Canonical text; parse_rule(print_rule(p)) == p.
std::string print_rule(const RuleProgram& p);

// ---- configurations (sandcfg v1) ----

Configuration parse_config(std::string_view text);
std::string serialize_config(const Configuration& x);

// ---- CA rules (carule v1) ----

/// A CA file either lists a dense table or names the bridge of a rule program.
struct CaFile {
    CaRule rule;
    /// Set for the bridge form.
    std::optional<RuleProgram> bridge_of;
};

CaFile parse_carule(std::string_view text);
/// Table form; throws BudgetError when the table would exceed `limit` entries.
std::string serialize_carule_table(const CaRule& g, std::uint64_t limit = kCaTableLimit);
std::string serialize_carule_bridge(const RuleProgram& p);

/// Guarded-case form of the SA acting through a binary dim-2 CA of radius
/// rho: radius 2*rho, with atoms on the offsets the CA can see.
RuleProgram extracted_program(const CaRule& g, std::uint64_t budget = enumeration_budget());

// ---- trajectories (one JSON object per line) ----

std::string trajectory_line(const OrbitRecord& rec);
std::string write_trajectory(const std::vector<OrbitRecord>& records);
std::vector<OrbitRecord> read_trajectory(std::string_view text);

// ---- rendering ----

struct RenderOptions {
    /// Vertical window; by default one level below the lowest finite pile up
    /// to the highest one.
    std::optional<std::int64_t> vlo;
    std::optional<std::int64_t> vhi;
    /// Columns around the union of the cores.
    std::int64_t margin = 2;
    /// SVG cell size in pixels.
    int cell = 10;
};

std::string render_ascii(const std::vector<OrbitRecord>& records, const RenderOptions& opts = {});
std::string render_svg(const std::vector<OrbitRecord>& records, const RenderOptions& opts = {});

// ---- command line ----

/// Exit codes: 0 success, 1 property or decision failure, 2 usage or parse error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sandlab
