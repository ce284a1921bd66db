#include "gmdtsp/instance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gmdtsp {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct Lines {
    std::vector<std::string> text;
    size_t pos = 0;

    bool done() const { return pos >= text.size(); }
    int lineno() const { return static_cast<int>(pos) + 1; }
};

// Splits "KEY : value" lines; section names have no colon.
bool split_keyword(const std::string& line, std::string& key, std::string& value) {
    size_t colon = line.find(':');
    if (colon == std::string::npos) {
        key = trim(line);
        value.clear();
        return !key.empty();
    }
    key = trim(line.substr(0, colon));
    value = trim(line.substr(colon + 1));
    return !key.empty();
}

// Reads whitespace-separated numbers across lines until `count` are consumed.
std::vector<double> read_numbers(Lines& in, size_t count, const char* field) {
    std::vector<double> out;
    out.reserve(count);
    while (out.size() < count) {
        if (in.done()) throw ParseError(in.lineno(), field, "unexpected end of file while reading numbers");
        std::istringstream ss(in.text[in.pos]);
        double v;
        while (out.size() < count && ss >> v) out.push_back(v);
        std::string left;
        if (out.size() == count && ss >> left)
            throw ParseError(in.lineno(), field, "trailing data after section values");
        ++in.pos;
    }
    return out;
}

}  // namespace

const char* to_string(EdgeWeightType t) {
    switch (t) {
        case EdgeWeightType::Euc2d: return "EUC_2D";
        case EdgeWeightType::Geo: return "GEO";
        case EdgeWeightType::Explicit: return "EXPLICIT";
    }
    return "?";
}

const char* to_string(EdgeWeightFormat f) {
    switch (f) {
        case EdgeWeightFormat::None: return "FUNCTION";
        case EdgeWeightFormat::FullMatrix: return "FULL_MATRIX";
        case EdgeWeightFormat::LowerDiagRow: return "LOWER_DIAG_ROW";
        case EdgeWeightFormat::UpperRow: return "UPPER_ROW";
    }
    return "?";
}

int64_t euc2d_cost(double x1, double y1, double x2, double y2) {
    double dx = x1 - x2, dy = y1 - y2;
    return static_cast<int64_t>(std::sqrt(dx * dx + dy * dy) + 0.5);
}

int64_t geo_cost(double lat1, double lon1, double lat2, double lon2) {
    // TSPLIB GEO: coordinates are DD.MM (degrees.minutes), radius 6378.388,
    // result truncated.
    constexpr double kPi = 3.141592;
    constexpr double kRadius = 6378.388;
    auto to_rad = [](double x) {
        double deg = std::trunc(x);
        double min = x - deg;
        return kPi * (deg + 5.0 * min / 3.0) / 180.0;
    };
    double la1 = to_rad(lat1), lo1 = to_rad(lon1);
    double la2 = to_rad(lat2), lo2 = to_rad(lon2);
    double q1 = std::cos(lo1 - lo2);
    double q2 = std::cos(la1 - la2);
    double q3 = std::cos(la1 + la2);
    return static_cast<int64_t>(kRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0);
}

int64_t RawGtspInstance::vertex_cost(int i, int j) const {
    switch (edge_weight_type) {
        case EdgeWeightType::Euc2d:
            return euc2d_cost(coords[i].first, coords[i].second, coords[j].first, coords[j].second);
        case EdgeWeightType::Geo:
            return geo_cost(coords[i].first, coords[i].second, coords[j].first, coords[j].second);
        case EdgeWeightType::Explicit:
            return matrix[static_cast<size_t>(i) * dimension + j];
    }
    return 0;
}

RawGtspInstance parse_instance(const std::string& text) {
    Lines in;
    {
        std::istringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) in.text.push_back(trim(line));
    }

    RawGtspInstance raw;
    bool have_dim = false, have_type = false, have_sets_count = false;
    int sets_count = 0;
    bool saw_coords = false, saw_matrix = false, saw_sets = false;

    while (!in.done()) {
        const std::string line = in.text[in.pos];
        if (line.empty()) {
            ++in.pos;
            continue;
        }
        std::string key, value;
        int lineno = in.lineno();
        if (!split_keyword(line, key, value))
            throw ParseError(lineno, "keyword", "malformed line");

        if (key == "NAME") {
            raw.name = value;
            ++in.pos;
        } else if (key == "TYPE") {
            if (value != "GTSP" && value != "TSP")
                throw ParseError(lineno, "TYPE", "unsupported TYPE '" + value + "'");
            ++in.pos;
        } else if (key == "COMMENT") {
            ++in.pos;
        } else if (key == "DIMENSION") {
            raw.dimension = std::atoi(value.c_str());
            if (raw.dimension <= 0) throw ParseError(lineno, "DIMENSION", "must be a positive integer");
            have_dim = true;
            ++in.pos;
        } else if (key == "GTSP_SETS") {
            sets_count = std::atoi(value.c_str());
            if (sets_count <= 0) throw ParseError(lineno, "GTSP_SETS", "must be a positive integer");
            have_sets_count = true;
            ++in.pos;
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value == "EUC_2D")
                raw.edge_weight_type = EdgeWeightType::Euc2d;
            else if (value == "GEO")
                raw.edge_weight_type = EdgeWeightType::Geo;
            else if (value == "EXPLICIT")
                raw.edge_weight_type = EdgeWeightType::Explicit;
            else
                throw ParseError(lineno, "EDGE_WEIGHT_TYPE", "unsupported type '" + value + "'");
            have_type = true;
            ++in.pos;
        } else if (key == "EDGE_WEIGHT_FORMAT") {
            if (value == "FULL_MATRIX")
                raw.edge_weight_format = EdgeWeightFormat::FullMatrix;
            else if (value == "LOWER_DIAG_ROW")
                raw.edge_weight_format = EdgeWeightFormat::LowerDiagRow;
            else if (value == "UPPER_ROW")
                raw.edge_weight_format = EdgeWeightFormat::UpperRow;
            else if (value == "FUNCTION")
                raw.edge_weight_format = EdgeWeightFormat::None;
            else
                throw ParseError(lineno, "EDGE_WEIGHT_FORMAT", "unsupported format '" + value + "'");
            ++in.pos;
        } else if (key == "NODE_COORD_SECTION") {
            if (!have_dim) throw ParseError(lineno, "NODE_COORD_SECTION", "DIMENSION must come first");
            ++in.pos;
            raw.coords.assign(raw.dimension, {0.0, 0.0});
            std::vector<char> seen(raw.dimension, 0);
            for (int r = 0; r < raw.dimension; ++r) {
                if (in.done()) throw ParseError(in.lineno(), "NODE_COORD_SECTION", "unexpected end of file");
                std::istringstream ss(in.text[in.pos]);
                int id;
                double x, y;
                if (!(ss >> id >> x >> y))
                    throw ParseError(in.lineno(), "NODE_COORD_SECTION", "expected 'id x y'");
                if (id < 1 || id > raw.dimension)
                    throw ParseError(in.lineno(), "NODE_COORD_SECTION", "vertex id out of range");
                if (seen[id - 1])
                    throw ParseError(in.lineno(), "NODE_COORD_SECTION", "duplicate vertex id");
                seen[id - 1] = 1;
                raw.coords[id - 1] = {x, y};
                ++in.pos;
            }
            saw_coords = true;
        } else if (key == "EDGE_WEIGHT_SECTION") {
            if (!have_dim) throw ParseError(lineno, "EDGE_WEIGHT_SECTION", "DIMENSION must come first");
            if (raw.edge_weight_format == EdgeWeightFormat::None)
                throw ParseError(lineno, "EDGE_WEIGHT_SECTION", "EDGE_WEIGHT_FORMAT must come first");
            ++in.pos;
            const int n = raw.dimension;
            size_t count = 0;
            switch (raw.edge_weight_format) {
                case EdgeWeightFormat::FullMatrix: count = static_cast<size_t>(n) * n; break;
                case EdgeWeightFormat::LowerDiagRow: count = static_cast<size_t>(n) * (n + 1) / 2; break;
                case EdgeWeightFormat::UpperRow: count = static_cast<size_t>(n) * (n - 1) / 2; break;
                case EdgeWeightFormat::None: break;
            }
            std::vector<double> vals = read_numbers(in, count, "EDGE_WEIGHT_SECTION");
            raw.matrix.assign(static_cast<size_t>(n) * n, 0);
            auto at = [&](int i, int j) -> int64_t& { return raw.matrix[static_cast<size_t>(i) * n + j]; };
            size_t p = 0;
            if (raw.edge_weight_format == EdgeWeightFormat::FullMatrix) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) at(i, j) = static_cast<int64_t>(vals[p++]);
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (at(i, j) != at(j, i))
                            throw ParseError(lineno, "EDGE_WEIGHT_SECTION", "matrix not symmetric");
            } else if (raw.edge_weight_format == EdgeWeightFormat::LowerDiagRow) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j <= i; ++j) {
                        int64_t v = static_cast<int64_t>(vals[p++]);
                        at(i, j) = v;
                        at(j, i) = v;
                    }
            } else {
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        int64_t v = static_cast<int64_t>(vals[p++]);
                        at(i, j) = v;
                        at(j, i) = v;
                    }
            }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j && at(i, j) < 0)
                        throw ParseError(lineno, "EDGE_WEIGHT_SECTION", "negative edge cost");
            saw_matrix = true;
        } else if (key == "GTSP_SET_SECTION") {
            if (!have_dim) throw ParseError(lineno, "GTSP_SET_SECTION", "DIMENSION must come first");
            if (!have_sets_count) throw ParseError(lineno, "GTSP_SET_SECTION", "GTSP_SETS must come first");
            ++in.pos;
            for (int s = 0; s < sets_count; ++s) {
                // Each set: id, member ids, terminated by -1; may span lines.
                std::vector<int> members;
                bool have_id = false, terminated = false;
                while (!terminated) {
                    if (in.done()) throw ParseError(in.lineno(), "GTSP_SET_SECTION", "unexpected end of file");
                    std::istringstream ss(in.text[in.pos]);
                    int v;
                    bool consumed_any = false;
                    while (!terminated && ss >> v) {
                        consumed_any = true;
                        if (!have_id) {
                            if (v != s + 1)
                                throw ParseError(in.lineno(), "GTSP_SET_SECTION",
                                                 "expected set id " + std::to_string(s + 1));
                            have_id = true;
                        } else if (v == -1) {
                            terminated = true;
                        } else {
                            if (v < 1 || v > raw.dimension)
                                throw ParseError(in.lineno(), "GTSP_SET_SECTION", "vertex id out of range");
                            members.push_back(v - 1);
                        }
                    }
                    if (!consumed_any && !trim(in.text[in.pos]).empty())
                        throw ParseError(in.lineno(), "GTSP_SET_SECTION", "expected set members");
                    if (!terminated) ++in.pos;
                }
                ++in.pos;
                if (members.empty())
                    throw ParseError(in.lineno(), "GTSP_SET_SECTION", "empty set");
                raw.sets.push_back(std::move(members));
            }
            saw_sets = true;
        } else if (key == "EOF") {
            break;
        } else {
            throw ParseError(lineno, "keyword", "malformed keyword '" + key + "'");
        }
    }

    if (!have_dim) throw ParseError(in.lineno(), "DIMENSION", "missing");
    if (!have_type) throw ParseError(in.lineno(), "EDGE_WEIGHT_TYPE", "missing");
    if (!saw_sets) throw ParseError(in.lineno(), "GTSP_SET_SECTION", "missing");
    if (raw.edge_weight_type == EdgeWeightType::Explicit && !saw_matrix)
        throw ParseError(in.lineno(), "EDGE_WEIGHT_SECTION", "missing for EXPLICIT weights");
    if (raw.edge_weight_type != EdgeWeightType::Explicit) {
        if (!saw_coords) throw ParseError(in.lineno(), "NODE_COORD_SECTION", "missing");
        if (static_cast<int>(raw.coords.size()) != raw.dimension)
            throw ParseError(in.lineno(), "NODE_COORD_SECTION", "dimension mismatch");
    }

    // Sets must form a proper partition of the vertices.
    std::vector<int> owner(raw.dimension, -1);
    for (size_t s = 0; s < raw.sets.size(); ++s) {
        for (int v : raw.sets[s]) {
            if (owner[v] >= 0) throw ParseError(0, "GTSP_SET_SECTION", "sets not disjoint");
            owner[v] = static_cast<int>(s);
        }
    }
    for (int v = 0; v < raw.dimension; ++v)
        if (owner[v] < 0)
            throw ParseError(0, "GTSP_SET_SECTION",
                             "sets do not cover vertex " + std::to_string(v + 1));
    return raw;
}

std::string serialize_instance(const RawGtspInstance& raw) {
    std::ostringstream out;
    out << "NAME: " << raw.name << "\n";
    out << "TYPE: GTSP\n";
    out << "DIMENSION: " << raw.dimension << "\n";
    out << "GTSP_SETS: " << raw.sets.size() << "\n";
    out << "EDGE_WEIGHT_TYPE: " << to_string(raw.edge_weight_type) << "\n";
    if (raw.edge_weight_type == EdgeWeightType::Explicit) {
        out << "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n";
        out << "EDGE_WEIGHT_SECTION\n";
        for (int i = 0; i < raw.dimension; ++i) {
            for (int j = 0; j < raw.dimension; ++j)
                out << raw.matrix[static_cast<size_t>(i) * raw.dimension + j]
                    << (j + 1 == raw.dimension ? "" : " ");
            out << "\n";
        }
    } else {
        out << "NODE_COORD_SECTION\n";
        char buf[80];
        for (int i = 0; i < raw.dimension; ++i) {
            std::snprintf(buf, sizeof(buf), "%d %.10g %.10g", i + 1, raw.coords[i].first,
                          raw.coords[i].second);
            out << buf << "\n";
        }
    }
    out << "GTSP_SET_SECTION\n";
    for (size_t s = 0; s < raw.sets.size(); ++s) {
        out << (s + 1);
        for (int v : raw.sets[s]) out << " " << (v + 1);
        out << " -1\n";
    }
    out << "EOF\n";
    return out.str();
}

int64_t Instance::edge_cost(int u, int v) const {
    if (u == v) throw ContractError("edge_cost: identical endpoints");
    if (is_depot_vertex(u) && is_depot_vertex(v))
        throw ContractError("edge_cost: depot-depot pairs are not in the edge set");
    if (is_depot_vertex(u)) return cost_dt(u, target_of_vertex(v));
    if (is_depot_vertex(v)) return cost_dt(v, target_of_vertex(u));
    return cost_tt(target_of_vertex(u), target_of_vertex(v));
}

std::vector<int> Instance::singleton_targets() const {
    std::vector<int> w;
    for (const auto& c : clusters)
        if (c.size() == 1) w.push_back(c[0]);
    std::sort(w.begin(), w.end());
    return w;
}

void Instance::validate() const {
    if (num_depots < 1) throw ContractError("instance has no depots");
    if (num_targets < 1) throw ContractError("instance has no targets");
    std::vector<int> seen(num_targets, 0);
    size_t total = 0;
    for (size_t h = 0; h < clusters.size(); ++h) {
        if (clusters[h].empty()) throw ContractError("empty cluster");
        for (int t : clusters[h]) {
            if (t < 0 || t >= num_targets) throw ContractError("cluster member out of range");
            if (seen[t]++) throw ContractError("target in two clusters");
            if (cluster_of[t] != static_cast<int>(h)) throw ContractError("cluster_of inconsistent");
            ++total;
        }
    }
    if (total != static_cast<size_t>(num_targets))
        throw ContractError("clusters do not cover all targets");
    for (int a = 0; a < num_targets; ++a)
        for (int b = a + 1; b < num_targets; ++b)
            if (cost_tt(a, b) != cost_tt(b, a) || cost_tt(a, b) < 0)
                throw ContractError("target costs not symmetric nonnegative");
    for (int d = 0; d < num_depots; ++d)
        for (int t = 0; t < num_targets; ++t)
            if (cost_dt(d, t) < 0) throw ContractError("negative depot-target cost");
}

namespace {

bool compute_triangle(const Instance& inst) {
    const int n = inst.num_targets;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (inst.cost_tt(i, j) + inst.cost_tt(j, k) < inst.cost_tt(i, k)) return false;
            }
        }
    return true;
}

}  // namespace

Instance build_instance(std::string name, int num_depots, int num_targets,
                        std::vector<std::vector<int>> clusters,
                        const std::function<int64_t(int, int)>& cost,
                        std::vector<int> depot_id, std::vector<int> target_id) {
    Instance inst;
    inst.name = std::move(name);
    inst.num_depots = num_depots;
    inst.num_targets = num_targets;
    inst.clusters = std::move(clusters);
    inst.cluster_of.assign(num_targets, -1);
    for (size_t h = 0; h < inst.clusters.size(); ++h)
        for (int t : inst.clusters[h]) inst.cluster_of[t] = static_cast<int>(h);

    if (depot_id.empty())
        for (int d = 0; d < num_depots; ++d) depot_id.push_back(d + 1);
    if (target_id.empty())
        for (int t = 0; t < num_targets; ++t) target_id.push_back(num_depots + t + 1);
    inst.depot_id = std::move(depot_id);
    inst.target_id = std::move(target_id);

    inst.tt.assign(static_cast<size_t>(num_targets) * num_targets, 0);
    inst.dt.assign(static_cast<size_t>(num_depots) * num_targets, 0);
    for (int a = 0; a < num_targets; ++a)
        for (int b = a + 1; b < num_targets; ++b) {
            int64_t c = cost(num_depots + a, num_depots + b);
            inst.tt[static_cast<size_t>(a) * num_targets + b] = c;
            inst.tt[static_cast<size_t>(b) * num_targets + a] = c;
        }
    for (int d = 0; d < num_depots; ++d)
        for (int t = 0; t < num_targets; ++t)
            inst.dt[static_cast<size_t>(d) * num_targets + t] = cost(d, num_depots + t);

    inst.triangle = compute_triangle(inst);
    inst.validate();
    return inst;
}

Instance derive_gmdtsp(const RawGtspInstance& raw, int depots) {
    if (depots < 1 || depots >= raw.dimension)
        throw ContractError("depot count must satisfy 1 <= d < dimension");

    std::vector<std::vector<int>> clusters;
    std::vector<int> dropped;
    for (size_t s = 0; s < raw.sets.size(); ++s) {
        std::vector<int> members;
        for (int v : raw.sets[s])
            if (v >= depots) members.push_back(v - depots);
        if (members.empty())
            dropped.push_back(static_cast<int>(s) + 1);
        else
            clusters.push_back(std::move(members));
    }
    if (clusters.empty()) throw ContractError("all clusters emptied by depot removal");

    const int n = raw.dimension - depots;
    std::vector<int> depot_id, target_id;
    for (int d = 0; d < depots; ++d) depot_id.push_back(d + 1);
    for (int t = 0; t < n; ++t) target_id.push_back(depots + t + 1);

    // Combined vertex range coincides with file order (depots are the first
    // `depots` file vertices).
    auto cost = [&](int u, int v) { return raw.vertex_cost(u, v); };
    Instance inst = build_instance(raw.name + "-" + std::to_string(depots), depots, n,
                                   std::move(clusters), cost, std::move(depot_id),
                                   std::move(target_id));
    inst.dropped_sets = std::move(dropped);
    return inst;
}

Instance sub_instance(const Instance& inst, const std::vector<char>& keep) {
    std::vector<int> new_index(inst.num_targets, -1);
    int n = 0;
    std::vector<int> target_id;
    for (int t = 0; t < inst.num_targets; ++t)
        if (keep[t]) {
            new_index[t] = n++;
            target_id.push_back(inst.target_id[t]);
        }
    std::vector<std::vector<int>> clusters;
    for (const auto& c : inst.clusters) {
        std::vector<int> members;
        for (int t : c)
            if (keep[t]) members.push_back(new_index[t]);
        if (members.empty()) throw ContractError("sub_instance would empty a cluster");
        clusters.push_back(std::move(members));
    }
    std::vector<int> old_target(n);
    for (int t = 0; t < inst.num_targets; ++t)
        if (keep[t]) old_target[new_index[t]] = t;

    auto cost = [&](int u, int v) {
        int k = inst.num_depots;
        auto map = [&](int w) { return w < k ? w : k + old_target[w - k]; };
        return inst.edge_cost(map(u), map(v));
    };
    Instance out = build_instance(inst.name, inst.num_depots, n, std::move(clusters), cost,
                                  inst.depot_id, std::move(target_id));
    out.dropped_sets = inst.dropped_sets;
    return out;
}

}  // namespace gmdtsp
