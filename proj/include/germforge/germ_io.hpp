#pragma once

#include "germforge/jet.hpp"
#include "germforge/mesh.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace germforge {

using Json = nlohmann::ordered_json;

/// Malformed polynomial text; carries the 1-based position of the offending token.
class ParseError : public UsageError {
public:
    ParseError(const std::string& message, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Input file violating the germ or report schema; the message names the field path.
class SchemaError : public UsageError {
public:
    SchemaError(const std::string& field_path, const std::string& message);
    const std::string& field_path() const { return field_path_; }

private:
    std::string field_path_;
};

using VariableNames = std::array<std::string, 2>;

/// Parses `text` as a polynomial in the two named variables. Decimal literals (or a Float
/// request) give a float jet; otherwise the jet is exact.
Jet2 parse_polynomial(const std::string& text, const VariableNames& variables, int order,
                      ScalarMode requested = ScalarMode::Exact);

/// True if the text contains a decimal literal.
bool has_decimal_literal(const std::string& text);

struct GermSpec {
    VariableNames variables{"u", "v"};
    std::array<std::string, 3> components;
    int order = 6;
    ScalarMode mode = ScalarMode::Exact;
};

GermSpec germ_spec_from_json(const Json& j);
Json to_json(const GermSpec& spec);
GermSpec load_germ_spec(const std::filesystem::path& path);

/// Builds the jets; `order_override` replaces the spec's order (used to raise the working order).
GermJets germ_from_spec(const GermSpec& spec, std::optional<int> order_override = std::nullopt);
GermJets load_germ(const std::filesystem::path& path);

/// Top-level report; sections absent from a run stay null.
struct Report {
    Json klass;
    Json normal_form;
    Json geometry;
    Json distance;
    Json focal_locus;
    std::vector<std::string> warnings;

    friend bool operator==(const Report&, const Report&) = default;
};

Json to_json(const Report& report);
Report report_from_json(const Json& j);
void emit_report(const Report& report, const std::filesystem::path& path);
Report load_report(const std::filesystem::path& path);

std::string mesh_to_string(const Mesh& mesh, MeshFormat format);
void emit_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat format);

/// Numbers in reports are strings: "p/q" when exact, 17 significant digits otherwise.
Json number_json(const Scalar& s);
Json number_json(double d);

Json read_json_file(const std::filesystem::path& path);

}  // namespace germforge
