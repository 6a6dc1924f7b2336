#pragma once

#include "germforge/frontcaustic.hpp"
#include "germforge/mesh.hpp"
#include "germforge/mond.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace germforge {

enum class Subcommand { Classify, Geometry, Distance, Focal, Mesh, Verify };
std::string to_string(Subcommand s);

enum class MeshKind { Surface, Wavefront, Focal };
std::string to_string(MeshKind k);
MeshKind mesh_kind_from_string(const std::string& text);

inline constexpr int kMinThetaSamples = 8;

struct RunConfig {
    Subcommand subcommand = Subcommand::Classify;
    std::string input;
    /// Empty: write to standard output.
    std::string output;
    std::optional<int> order;
    int kmax = kDefaultKMax;
    int theta_samples = 32;
    /// From --mode, else from GERMFORGE_MODE; unset leaves the germ file in charge.
    std::optional<ScalarMode> mode;

    MeshKind mesh_kind = MeshKind::Surface;
    MeshGrid grid;
    double t0 = 0;
    OffsetSign sign = OffsetSign::Plus;
    FocalBranch branch = FocalBranch::Bounded;
    std::optional<MeshFormat> format;

    std::uint64_t seed = 0;
    int samples = 50;

    /// "x0,y0,z0" target points and "theta,lambda" directions given on the command line.
    std::vector<std::string> probes;
    std::vector<std::string> directions;

    /// Throws UsageError.
    void validate() const;
};

/// "64" or "64x48" (rows x cols).
std::pair<int, int> parse_grid_size(const std::string& text);

/// Command line to config; `env_mode` is the value of GERMFORGE_MODE or null. Throws UsageError.
/// Returns nullopt after printing help or a version to `out`.
std::optional<RunConfig> parse_run_config(int argc, const char* const* argv, const char* env_mode, std::ostream& out);

/// Exit code: 0 on success, 1 on usage errors, 2 on consistency failures or verify mismatches.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_run_config + run with every failure turned into an {"error": ...} object on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace germforge
