#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gmdtsp {

/// Raised on malformed instance files; carries the offending line and field.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, std::string field, const std::string& what)
        : std::runtime_error("parse error (line " + std::to_string(line) + ", " + field + "): " + what),
          line_(line),
          field_(std::move(field)) {}

    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

/// Raised when an operation is called outside its stated preconditions.
class ContractError : public std::runtime_error {
public:
    explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

enum class EdgeWeightType { Euc2d, Geo, Explicit };
enum class EdgeWeightFormat { None, FullMatrix, LowerDiagRow, UpperRow };

const char* to_string(EdgeWeightType t);
const char* to_string(EdgeWeightFormat f);

/// A GTSP-lib file as parsed: vertices are 0-indexed internally, 1-indexed in
/// the file. `sets` must form a proper partition of {0..dimension-1}.
struct RawGtspInstance {
    std::string name;
    int dimension = 0;
    EdgeWeightType edge_weight_type = EdgeWeightType::Euc2d;
    EdgeWeightFormat edge_weight_format = EdgeWeightFormat::None;
    std::vector<std::pair<double, double>> coords;  // EUC_2D / GEO only
    std::vector<int64_t> matrix;                    // dense dimension*dimension, EXPLICIT only
    std::vector<std::vector<int>> sets;             // 0-indexed vertex ids

    /// TSPLIB distance between file vertices (0-indexed), per edge_weight_type.
    int64_t vertex_cost(int i, int j) const;

    bool operator==(const RawGtspInstance&) const = default;
};

RawGtspInstance parse_instance(const std::string& text);
std::string serialize_instance(const RawGtspInstance& raw);

/// TSPLIB distance helpers, exposed for cross-checking.
int64_t euc2d_cost(double x1, double y1, double x2, double y2);
int64_t geo_cost(double lat1deg, double lon1deg, double lat2deg, double lon2deg);

/// A derived multi-depot instance. Vertices live in one range 0..k+n-1 with
/// the k depots first; `depot_id` / `target_id` keep the original 1-based
/// file ids so solutions can be reported against the source file.
struct Instance {
    std::string name;
    int num_depots = 0;
    int num_targets = 0;
    std::vector<int> depot_id;
    std::vector<int> target_id;
    std::vector<std::vector<int>> clusters;  // target indices, each target in exactly one
    std::vector<int> cluster_of;             // per target
    std::vector<int> dropped_sets;           // raw set ids emptied by depot removal
    bool triangle = false;

    std::vector<int64_t> tt;  // n*n target-target costs
    std::vector<int64_t> dt;  // k*n depot-target costs

    int num_clusters() const { return static_cast<int>(clusters.size()); }
    int num_vertices() const { return num_depots + num_targets; }

    int64_t cost_tt(int a, int b) const { return tt[static_cast<size_t>(a) * num_targets + b]; }
    int64_t cost_dt(int d, int t) const { return dt[static_cast<size_t>(d) * num_targets + t]; }

    bool is_depot_vertex(int v) const { return v < num_depots; }
    int target_of_vertex(int v) const { return v - num_depots; }

    /// Cost of edge (u,v) in the combined vertex range. Depot-depot pairs and
    /// u == v are outside the edge set and raise ContractError.
    int64_t edge_cost(int u, int v) const;

    /// W: targets whose cluster is a singleton. Recomputed on every call.
    std::vector<int> singleton_targets() const;
    bool in_singleton_cluster(int t) const { return clusters[cluster_of[t]].size() == 1; }

    /// Asserts the partition and cost-symmetry invariants; throws on violation.
    void validate() const;
};

/// Builds an Instance from explicit data; costs are queried once per pair via
/// `cost(u, v)` over the combined vertex range and checked for symmetry.
Instance build_instance(std::string name, int num_depots, int num_targets,
                        std::vector<std::vector<int>> clusters,
                        const std::function<int64_t(int, int)>& cost,
                        std::vector<int> depot_id = {}, std::vector<int> target_id = {});

/// First `depots` file vertices become depots and are removed from the sets;
/// emptied sets are dropped (recorded in dropped_sets).
Instance derive_gmdtsp(const RawGtspInstance& raw, int depots);

/// Restriction of `inst` to the targets with keep[t] != 0. Clusters shrink
/// accordingly; original ids are preserved.
Instance sub_instance(const Instance& inst, const std::vector<char>& keep);

}  // namespace gmdtsp
