#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "reslab/decay.hpp"
#include "reslab/graph.hpp"
#include "reslab/models.hpp"

namespace reslab {

/// Parse the graph description file (JSON): keys `vertices`, `edges`, `leads`.
/// Coupling spec: {type: "delta"|"delta_prime"|"kirchhoff"|"anti_kirchhoff"|
/// "dirichlet"|"matrix", alpha?, beta?, re?, im?}; matrices row-major.
MetricGraph load_graph(const std::string& path);
MetricGraph parse_graph(const std::string& json_text);

using AnyModel = std::variant<FriedrichsModel, TwoChannelModel, WinterModel, StubModel,
                              LassoModel, LoopTwoLeadsModel, CrossModel, PolygonModel>;

/// Parse a model parameter file for the named model.
AnyModel load_model(const std::string& name, const std::string& params_path);
AnyModel parse_model(const std::string& name, const std::string& json_text);

/// Tabular output with a trailing metadata comment block.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> meta;

    void add_row(std::initializer_list<std::string> cells);
    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;
};

/// Shortest round-trippable decimal form of x (%.17g trimmed), locale-free.
std::string format_double(double x);

/// FNV-1a 64-bit hash of the canonical configuration string.
std::string config_hash(const std::string& canonical);

std::string version_string();

}  // namespace reslab
