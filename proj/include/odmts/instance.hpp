#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "odmts/matrix.hpp"

namespace odmts {

using json = nlohmann::ordered_json;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class IncomeClass { low, medium, high };

inline const char* to_string(IncomeClass c) {
    switch (c) {
        case IncomeClass::low: return "low";
        case IncomeClass::medium: return "medium";
        default: return "high";
    }
}

inline std::optional<IncomeClass> income_class_from_string(const std::string& s) {
    if (s == "low") return IncomeClass::low;
    if (s == "medium") return IncomeClass::medium;
    if (s == "high") return IncomeClass::high;
    return std::nullopt;
}

// System-wide cost parameters. Costs are per mile, times in minutes.
struct EconomicParams {
    double theta = 0.001;             // convenience weight in [0,1]
    double bus_cost_per_mile = 5.44;  // b
    double shuttle_cost_per_mile = 1.61; // g
    double fare = 2.50;               // phi
    int buses_per_leg = 16;           // n, bus count committed per opened leg
    double bus_wait = 7.5;            // S, expected wait before boarding a bus
};

// One origin/destination demand with an optional mode choice.
struct Trip {
    std::string id;
    int origin = -1;       // node index
    int destination = -1;  // node index
    int riders = 1;        // p^r
    bool has_choice = false;
    double alpha = 1.0;    // tolerated slowdown factor, only meaningful with has_choice
    double t_cur = 0.0;    // current-mode duration the rider compares against
    IncomeClass income_class = IncomeClass::low;
};

struct Network {
    std::vector<std::string> nodes;  // stop ids, index order defines matrix order
    std::vector<int> hubs;           // node indices eligible for bus legs
    Matrix time;                     // minutes, node x node
    Matrix dist;                     // miles, node x node

    // Optional geometry and zoning, present on generated instances. Used only
    // for exports and reporting, never by the optimization itself.
    std::vector<std::array<double, 2>> coords;
    std::vector<IncomeClass> stop_income;
};

struct Instance {
    Network network;
    std::vector<Trip> trips;
    EconomicParams econ;

    int num_nodes() const { return static_cast<int>(network.nodes.size()); }
    int num_hubs() const { return static_cast<int>(network.hubs.size()); }
    int hub_node(int h) const { return network.hubs[h]; }

    // Hub position of a node, or -1 when the node is not a hub.
    int hub_index_of(int node) const {
        for (int h = 0; h < num_hubs(); ++h)
            if (network.hubs[h] == node) return h;
        return -1;
    }
};

// Arc cost building blocks shared by the follower and the master objective.
// All values derive from the instance; nothing here is cached state.
class ArcWeights {
public:
    explicit ArcWeights(const Instance& inst) : inst_(&inst) {}

    // weighted cost of riding a shuttle from node i to node j
    double gamma(int i, int j) const {
        const auto& e = inst_->econ;
        return (1.0 - e.theta) * e.shuttle_cost_per_mile * inst_->network.dist(i, j)
             + e.theta * inst_->network.time(i, j);
    }

    // weighted inconvenience of riding an opened bus leg between hubs h and l (hub indices)
    double tau(int h, int l) const {
        const auto& e = inst_->econ;
        int a = inst_->hub_node(h), b = inst_->hub_node(l);
        return e.theta * (inst_->network.time(a, b) + e.bus_wait);
    }

    // investment cost of opening the bus leg h -> l (hub indices)
    double beta(int h, int l) const {
        const auto& e = inst_->econ;
        int a = inst_->hub_node(h), b = inst_->hub_node(l);
        return (1.0 - e.theta) * e.bus_cost_per_mile * e.buses_per_leg * inst_->network.dist(a, b);
    }

    // fare revenue credited per adopting rider
    double fare_revenue() const {
        return (1.0 - inst_->econ.theta) * inst_->econ.fare;
    }

    // rider-facing duration of a bus leg, wait included
    double bus_leg_minutes(int h, int l) const {
        int a = inst_->hub_node(h), b = inst_->hub_node(l);
        return inst_->network.time(a, b) + inst_->econ.bus_wait;
    }

private:
    const Instance* inst_;
};

namespace detail {

inline std::string fmt_index(const char* name, std::size_t i) {
    std::ostringstream os;
    os << name << "[" << i << "]";
    return os.str();
}

inline void check_matrix(const Matrix& m, std::size_t n, const char* name,
                         std::vector<std::string>& out) {
    if (m.size() != n) {
        out.push_back(std::string(name) + ": expected " + std::to_string(n) + "x"
                      + std::to_string(n) + " entries, got " + std::to_string(m.size()) + "x"
                      + std::to_string(m.size()));
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = m(i, j);
            if (!(v >= 0.0) || !std::isfinite(v)) {
                std::ostringstream os;
                os << name << "[" << i << "][" << j << "]: negative or non-finite entry " << v;
                out.push_back(os.str());
            }
        }
        if (m(i, i) != 0.0) {
            std::ostringstream os;
            os << name << "[" << i << "][" << i << "]: diagonal must be zero";
            out.push_back(os.str());
        }
    }
}

} // namespace detail

// Structural checks; returns human-readable violations, empty when the instance is sound.
inline std::vector<std::string> validate(const Instance& inst) {
    std::vector<std::string> out;
    const auto& net = inst.network;
    const std::size_t n = net.nodes.size();

    if (n == 0) out.push_back("nodes: must not be empty");
    {
        std::unordered_map<std::string, int> seen;
        for (std::size_t i = 0; i < n; ++i) {
            if (net.nodes[i].empty())
                out.push_back(detail::fmt_index("nodes", i) + ": empty id");
            auto [it, fresh] = seen.emplace(net.nodes[i], static_cast<int>(i));
            if (!fresh)
                out.push_back(detail::fmt_index("nodes", i) + ": duplicate id '" + net.nodes[i] + "'");
        }
    }

    if (net.hubs.empty()) out.push_back("hubs: must not be empty");
    {
        std::vector<char> used(n, 0);
        for (std::size_t i = 0; i < net.hubs.size(); ++i) {
            int h = net.hubs[i];
            if (h < 0 || h >= static_cast<int>(n)) {
                out.push_back(detail::fmt_index("hubs", i) + ": node index " + std::to_string(h)
                              + " out of range");
            } else if (used[h]) {
                out.push_back(detail::fmt_index("hubs", i) + ": duplicate hub '" + net.nodes[h] + "'");
            } else {
                used[h] = 1;
            }
        }
    }

    detail::check_matrix(net.time, n, "time", out);
    detail::check_matrix(net.dist, n, "dist", out);

    if (!net.coords.empty() && net.coords.size() != n)
        out.push_back("coords: expected one [x,y] pair per node");
    if (!net.stop_income.empty() && net.stop_income.size() != n)
        out.push_back("stop_income: expected one class per node");

    const auto& e = inst.econ;
    if (!(e.theta >= 0.0 && e.theta <= 1.0))
        out.push_back("econ.theta: out of [0,1] (got " + std::to_string(e.theta) + ")");
    if (e.bus_cost_per_mile < 0) out.push_back("econ.bus_cost_per_mile: negative");
    if (e.shuttle_cost_per_mile < 0) out.push_back("econ.shuttle_cost_per_mile: negative");
    if (e.fare < 0) out.push_back("econ.fare: negative");
    if (e.buses_per_leg < 0) out.push_back("econ.buses_per_leg: negative");
    if (e.bus_wait < 0) out.push_back("econ.bus_wait: negative");

    {
        std::unordered_map<std::string, int> ids;
        for (std::size_t r = 0; r < inst.trips.size(); ++r) {
            const Trip& t = inst.trips[r];
            const std::string at = detail::fmt_index("trips", r);
            if (t.id.empty()) out.push_back(at + ".id: empty");
            auto [it, fresh] = ids.emplace(t.id, static_cast<int>(r));
            if (!fresh) out.push_back(at + ".id: duplicate '" + t.id + "'");
            if (t.origin < 0 || t.origin >= static_cast<int>(n))
                out.push_back(at + ".origin: unknown node");
            if (t.destination < 0 || t.destination >= static_cast<int>(n))
                out.push_back(at + ".destination: unknown node");
            if (t.origin == t.destination)
                out.push_back(at + ": origin equals destination");
            if (t.riders < 1) out.push_back(at + ".riders: must be a positive count");
            if (t.has_choice) {
                if (t.alpha < 1.0)
                    out.push_back(at + ".alpha: must be >= 1 for trips with a choice");
                if (!(t.t_cur > 0.0))
                    out.push_back(at + ".t_cur: must be positive for trips with a choice");
            }
        }
    }
    return out;
}

// All-pairs shortest-path closure of both matrices; pure, input left untouched.
// Idempotent, and never increases an entry. Sweeps repeat until nothing moves,
// so reruns on already-closed matrices are exact no-ops despite rounding.
inline Instance metricize(Instance inst) {
    const std::size_t n = inst.network.nodes.size();
    for (Matrix* m : {&inst.network.time, &inst.network.dist}) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i) {
                    const double ik = (*m)(i, k);
                    for (std::size_t j = 0; j < n; ++j) {
                        const double via = ik + (*m)(k, j);
                        if (via < (*m)(i, j)) {
                            (*m)(i, j) = via;
                            changed = true;
                        }
                    }
                }
        }
    }
    return inst;
}

// ---- JSON serialization ----

namespace detail {

inline Matrix matrix_from_json(const json& j, const char* name, std::size_t n) {
    if (!j.is_array() || j.size() != n)
        throw IoError(std::string(name) + ": expected " + std::to_string(n) + " rows");
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || row.size() != n)
            throw IoError(std::string(name) + "[" + std::to_string(i) + "]: expected "
                          + std::to_string(n) + " entries");
        for (std::size_t jj = 0; jj < n; ++jj) m(i, jj) = row[jj].get<double>();
    }
    return m;
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

inline Instance parse_instance(const json& j) {
    Instance inst;
    Network& net = inst.network;

    if (!j.contains("nodes")) throw IoError("nodes: missing");
    net.nodes = j.at("nodes").get<std::vector<std::string>>();
    const std::size_t n = net.nodes.size();

    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(net.nodes[i], static_cast<int>(i));
    auto node_of = [&](const json& v, const std::string& where) {
        const std::string id = v.get<std::string>();
        auto it = index.find(id);
        if (it == index.end()) throw IoError(where + ": unknown node '" + id + "'");
        return it->second;
    };

    if (!j.contains("hubs")) throw IoError("hubs: missing");
    for (std::size_t i = 0; i < j.at("hubs").size(); ++i)
        net.hubs.push_back(node_of(j.at("hubs")[i], detail::fmt_index("hubs", i)));

    net.time = detail::matrix_from_json(j.at("time"), "time", n);
    net.dist = detail::matrix_from_json(j.at("dist"), "dist", n);

    if (j.contains("coords")) {
        for (const auto& c : j.at("coords"))
            net.coords.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    }
    if (j.contains("stop_income")) {
        for (std::size_t i = 0; i < j.at("stop_income").size(); ++i) {
            auto c = income_class_from_string(j.at("stop_income")[i].get<std::string>());
            if (!c) throw IoError(detail::fmt_index("stop_income", i) + ": unknown class");
            net.stop_income.push_back(*c);
        }
    }

    if (j.contains("trips")) {
        std::size_t r = 0;
        for (const auto& tj : j.at("trips")) {
            const std::string at = detail::fmt_index("trips", r++);
            Trip t;
            if (tj.contains("id")) {
                t.id = tj.at("id").is_string() ? tj.at("id").get<std::string>()
                                               : tj.at("id").dump();
            } else {
                throw IoError(at + ".id: missing");
            }
            t.origin = node_of(tj.at("origin"), at + ".origin");
            t.destination = node_of(tj.at("destination"), at + ".destination");
            t.riders = tj.value("riders", 1);
            t.has_choice = tj.value("has_choice", false);
            if (t.has_choice) {
                if (!tj.contains("alpha")) throw IoError(at + ".alpha: required with has_choice");
                t.alpha = tj.at("alpha").get<double>();
                // riders compare against their current mode; default is the direct transit time
                if (tj.contains("t_cur")) t.t_cur = tj.at("t_cur").get<double>();
                else if (t.origin >= 0 && t.destination >= 0)
                    t.t_cur = net.time(t.origin, t.destination);
            }
            if (tj.contains("income_class")) {
                auto c = income_class_from_string(tj.at("income_class").get<std::string>());
                if (!c) throw IoError(at + ".income_class: unknown class '"
                                      + tj.at("income_class").get<std::string>() + "'");
                t.income_class = *c;
            }
            inst.trips.push_back(std::move(t));
        }
    }

    if (j.contains("econ")) {
        const auto& ej = j.at("econ");
        EconomicParams& e = inst.econ;
        e.theta = ej.value("theta", e.theta);
        e.bus_cost_per_mile = ej.value("bus_cost_per_mile", e.bus_cost_per_mile);
        e.shuttle_cost_per_mile = ej.value("shuttle_cost_per_mile", e.shuttle_cost_per_mile);
        e.fare = ej.value("fare", e.fare);
        e.buses_per_leg = ej.value("buses_per_leg", e.buses_per_leg);
        e.bus_wait = ej.value("bus_wait", e.bus_wait);
    }

    return inst;
}

inline json instance_to_json(const Instance& inst) {
    const Network& net = inst.network;
    json j;
    j["nodes"] = net.nodes;
    json hubs = json::array();
    for (int h : net.hubs) hubs.push_back(net.nodes[h]);
    j["hubs"] = std::move(hubs);
    j["time"] = detail::matrix_to_json(net.time);
    j["dist"] = detail::matrix_to_json(net.dist);
    if (!net.coords.empty()) {
        json cs = json::array();
        for (const auto& c : net.coords) cs.push_back({c[0], c[1]});
        j["coords"] = std::move(cs);
    }
    if (!net.stop_income.empty()) {
        json si = json::array();
        for (auto c : net.stop_income) si.push_back(to_string(c));
        j["stop_income"] = std::move(si);
    }
    json trips = json::array();
    for (const Trip& t : inst.trips) {
        json tj;
        tj["id"] = t.id;
        tj["origin"] = net.nodes[t.origin];
        tj["destination"] = net.nodes[t.destination];
        tj["riders"] = t.riders;
        tj["has_choice"] = t.has_choice;
        if (t.has_choice) {
            tj["alpha"] = t.alpha;
            tj["t_cur"] = t.t_cur;
        }
        tj["income_class"] = to_string(t.income_class);
        trips.push_back(std::move(tj));
    }
    j["trips"] = std::move(trips);
    j["econ"] = {
        {"theta", inst.econ.theta},
        {"bus_cost_per_mile", inst.econ.bus_cost_per_mile},
        {"shuttle_cost_per_mile", inst.econ.shuttle_cost_per_mile},
        {"fare", inst.econ.fare},
        {"buses_per_leg", inst.econ.buses_per_leg},
        {"bus_wait", inst.econ.bus_wait},
    };
    return j;
}

// Parses, fills defaults, and validates; throws IoError or ValidationError.
inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError(path + ": invalid JSON: " + e.what());
    }
    Instance inst = parse_instance(j);
    auto problems = validate(inst);
    if (!problems.empty()) {
        std::string msg = path + ": invalid instance";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ValidationError(msg);
    }
    return inst;
}

inline void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write instance file: " + path);
    out << instance_to_json(inst).dump(2) << "\n";
}

} // namespace odmts
