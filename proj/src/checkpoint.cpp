#include "bsr/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bsr {

using nlohmann::json;

namespace {

// 17 significant digits round-trip any double exactly through decimal.
std::string dtos(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void append_array(std::ostringstream& os, const Vec& x) {
    os << "[";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i) os << ",";
        os << dtos(x[i]);
    }
    os << "]";
}

const char* kind_name(SystemKind k) {
    switch (k) {
        case SystemKind::Full: return "full";
        case SystemKind::Regularized: return "regularized";
        case SystemKind::Limit: return "limit";
    }
    return "full";
}

SystemKind kind_from(const std::string& s) {
    if (s == "full") return SystemKind::Full;
    if (s == "regularized") return SystemKind::Regularized;
    if (s == "limit") return SystemKind::Limit;
    throw CheckpointError("unknown system kind '" + s + "'");
}

} // namespace

std::string serialize_state(const StatePair& state, const GeometryConfig& geom,
                            const ModelParams& p) {
    // Hand-rolled writer: the array formatting must be exactly %.17g so
    // the roundtrip guarantee is independent of the JSON library.
    std::ostringstream os;
    os << "{\"schema\":1,";
    os << "\"geometry\":{";
    if (geom.kind == GeomKind::Interval)
        os << "\"kind\":\"interval\",\"n\":" << geom.n;
    else
        os << "\"kind\":\"disk\",\"n_r\":" << geom.n_r
           << ",\"n_theta\":" << geom.n_theta;
    os << "},";
    os << "\"t\":" << dtos(state.t) << ",";
    os << "\"u\":";
    append_array(os, state.u);
    os << ",\"v\":";
    append_array(os, state.v);
    os << ",\"params\":{"
       << "\"alpha\":" << p.alpha << ",\"beta\":" << p.beta
       << ",\"d_u\":" << dtos(p.d_u) << ",\"d_v\":" << dtos(p.d_v)
       << ",\"epsilon\":" << dtos(p.epsilon) << ",\"delta\":" << dtos(p.delta)
       << ",\"kind\":\"" << kind_name(p.kind) << "\"}}";
    return os.str();
}

void save_state(const std::string& path, const StatePair& state,
                const GeometryConfig& geom, const ModelParams& p) {
    std::ofstream out(path);
    if (!out) throw CheckpointError("cannot open for writing: " + path);
    out << serialize_state(state, geom, p) << "\n";
    if (!out) throw CheckpointError("write failed: " + path);
}

Checkpoint deserialize_state(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CheckpointError(std::string("malformed or truncated JSON: ") +
                              e.what());
    }
    for (const char* key : {"schema", "geometry", "t", "u", "v", "params"})
        if (!j.contains(key))
            throw CheckpointError(std::string("missing field '") + key + "'");
    if (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
        throw CheckpointError("unsupported schema version (expected 1)");

    Checkpoint cp;
    const json& g = j["geometry"];
    const std::string gk = g.value("kind", "");
    if (gk == "interval") {
        cp.geometry.kind = GeomKind::Interval;
        cp.geometry.n = g.value("n", 0);
    } else if (gk == "disk") {
        cp.geometry.kind = GeomKind::Disk;
        cp.geometry.n_r = g.value("n_r", 0);
        cp.geometry.n_theta = g.value("n_theta", 0);
    } else {
        throw CheckpointError("geometry.kind must be 'interval' or 'disk'");
    }

    cp.state.t = j["t"].get<double>();
    const json& u = j["u"];
    const json& v = j["v"];
    if (!u.is_array() || !v.is_array())
        throw CheckpointError("u and v must be arrays");
    cp.state.u.resize(Eigen::Index(u.size()));
    cp.state.v.resize(Eigen::Index(v.size()));
    for (size_t i = 0; i < u.size(); ++i) cp.state.u[i] = u[i].get<double>();
    for (size_t i = 0; i < v.size(); ++i) cp.state.v[i] = v[i].get<double>();

    const json& p = j["params"];
    cp.params.alpha = p.value("alpha", 1);
    cp.params.beta = p.value("beta", 1);
    cp.params.d_u = p.value("d_u", 1.0);
    cp.params.d_v = p.value("d_v", 0.0);
    cp.params.epsilon = p.value("epsilon", 1.0);
    cp.params.delta = p.value("delta", 0.0);
    cp.params.kind = kind_from(p.value("kind", "full"));
    cp.params.validate();

    const int nb = cp.geometry.kind == GeomKind::Interval
                       ? cp.geometry.n
                       : cp.geometry.n_r * cp.geometry.n_theta;
    const int ns =
        cp.geometry.kind == GeomKind::Interval ? 2 : cp.geometry.n_theta;
    if (cp.state.u.size() != nb || cp.state.v.size() != ns)
        throw CheckpointError("state length does not match the geometry");
    return cp;
}

Checkpoint load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_state(buf.str());
}

} // namespace bsr
