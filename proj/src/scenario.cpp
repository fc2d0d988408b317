#include "sweep/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

namespace sweep {

using json = nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void schema_error(const std::string& field, const std::string& msg) {
    throw Error(ErrorKind::SchemaError, "field " + (field.empty() ? std::string("/") : field) + ": " + msg);
}

// A JSON node together with its pointer path, for error messages.
struct Node {
    const json& j;
    std::string path;

    bool has(const char* key) const { return j.is_object() && j.contains(key); }

    Node at(const char* key) const {
        if (!j.is_object()) schema_error(path, "expected an object");
        if (!j.contains(key)) schema_error(path + "/" + key, "missing");
        return {j.at(key), path + "/" + key};
    }

    Node item(std::size_t i) const { return {j.at(i), path + "/" + std::to_string(i)}; }

    double num() const {
        if (!j.is_number()) schema_error(path, "expected a number");
        return j.get<double>();
    }

    double positive() const {
        const double v = num();
        if (!(v > 0.0)) schema_error(path, "must be positive, got " + std::to_string(v));
        return v;
    }

    // null stands for an unbounded piece end
    double bound(double fallback) const { return j.is_null() ? fallback : num(); }

    std::string str() const {
        if (!j.is_string()) schema_error(path, "expected a string");
        return j.get<std::string>();
    }

    std::size_t size() const {
        if (!j.is_array()) schema_error(path, "expected an array");
        return j.size();
    }

    Vector vec(Eigen::Index dim) const {
        const std::size_t n = size();
        if (static_cast<Eigen::Index>(n) != dim) {
            schema_error(path, "expected " + std::to_string(dim) + " components, got " + std::to_string(n));
        }
        Vector v(dim);
        for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = item(i).num();
        return v;
    }

    std::uint64_t count() const {
        if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
            schema_error(path, "expected a non-negative integer");
        }
        return j.get<std::uint64_t>();
    }
};

// Geometry errors from the factories are reported against the offending field.
template <class F>
auto guarded(const std::string& path, F&& make) {
    try {
        return make();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::UnknownShapeTag || e.kind() == ErrorKind::SchemaError) throw;
        schema_error(path, e.what());
    }
}

ProxSet parse_shape(const Node& n, Eigen::Index dim) {
    const std::string type = n.at("type").str();
    return guarded(n.path, [&]() -> ProxSet {
        if (type == "half_space") return ProxSet::half_space(n.at("a").vec(dim), n.at("b").num());
        if (type == "ball") return ProxSet::ball(n.at("center").vec(dim), n.at("radius").positive());
        if (type == "box") return ProxSet::box(n.at("lo").vec(dim), n.at("hi").vec(dim));
        if (type == "ball_complement") {
            return ProxSet::ball_complement(n.at("center").vec(dim), n.at("radius").positive());
        }
        if (type == "polytope") {
            const Node faces = n.at("faces");
            std::vector<HalfSpace> hs;
            for (std::size_t i = 0; i < faces.size(); ++i) {
                const Node f = faces.item(i);
                hs.push_back({f.at("a").vec(dim), f.at("b").num()});
            }
            return ProxSet::polytope(std::move(hs));
        }
        if (type == "rigid_image") {
            const Node rot = n.at("rotation");
            if (static_cast<Eigen::Index>(rot.size()) != dim) schema_error(rot.path, "expected a square matrix");
            Matrix m(dim, dim);
            for (std::size_t i = 0; i < rot.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rot.item(i).vec(dim);
            return ProxSet::rigid_image(parse_shape(n.at("base"), dim), m, n.at("translation").vec(dim));
        }
        throw Error(ErrorKind::UnknownShapeTag, "unknown shape type '" + type + "' at " + n.path);
    });
}

template <class V, class Read>
Path<V> parse_path(const Node& n, Read read) {
    const std::string type = n.at("type").str();
    return guarded(n.path, [&]() -> Path<V> {
        if (type == "constant") return Path<V>::constant(read(n.at("value")));
        if (type == "linear") return Path<V>::linear(read(n.at("offset")), read(n.at("rate")));
        if (type == "piecewise") {
            const Node pieces = n.at("pieces");
            std::vector<LinearPiece<V>> out;
            for (std::size_t i = 0; i < pieces.size(); ++i) {
                const Node p = pieces.item(i);
                out.push_back({p.at("from").bound(-kInf), p.at("to").bound(kInf), read(p.at("offset")),
                               read(p.at("rate"))});
            }
            return Path<V>::piecewise(std::move(out));
        }
        throw Error(ErrorKind::UnknownShapeTag, "unknown path type '" + type + "' at " + n.path);
    });
}

MovingFamily parse_family(const Node& n, Eigen::Index dim, double horizon) {
    const std::string type = n.at("type").str();
    auto vread = [dim](const Node& v) { return v.vec(dim); };
    auto sread = [](const Node& v) { return v.num(); };
    if (type == "stationary") {
        ProxSet set = parse_shape(n.at("set"), dim);
        return guarded(n.path, [&] { return MovingFamily::stationary(set, horizon); });
    }
    if (type == "translate") {
        ProxSet base = parse_shape(n.at("base"), dim);
        VectorPath path = parse_path<Vector>(n.at("path"), vread);
        return guarded(n.path, [&] { return MovingFamily::translate(base, path, horizon); });
    }
    if (type == "rigid") {
        ProxSet base = parse_shape(n.at("base"), dim);
        ScalarPath angle = parse_path<double>(n.at("angle"), sread);
        VectorPath shift = parse_path<Vector>(n.at("shift"), vread);
        return guarded(n.path, [&] { return MovingFamily::rigid(base, angle, shift, horizon); });
    }
    if (type == "radius") {
        VectorPath center = parse_path<Vector>(n.at("center"), vread);
        ScalarPath radius = parse_path<double>(n.at("radius"), sread);
        bool complement = false;
        if (n.has("complement")) {
            const Node c = n.at("complement");
            if (!c.j.is_boolean()) schema_error(c.path, "expected a boolean");
            complement = c.j.get<bool>();
        }
        for (double r : radius.knot_values(0.0, horizon)) {
            if (!(r > 0.0)) schema_error(n.path + "/radius", "radius must stay positive on [0, horizon]");
        }
        return guarded(n.path, [&] { return MovingFamily::radius_schedule(center, radius, complement, horizon); });
    }
    if (type == "piecewise") {
        const Node pieces = n.at("pieces");
        std::vector<FamilyPiece> out;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const Node p = pieces.item(i);
            const double from = p.at("from").num();
            const double to = p.at("to").num();
            auto fam = std::make_shared<const MovingFamily>(parse_family(p.at("family"), dim, to));
            out.push_back({from, to, std::move(fam)});
        }
        MovingFamily fam = guarded(n.path, [&] { return MovingFamily::piecewise(out); });
        if (fam.horizon() != horizon) schema_error(n.path, "pieces must end at the scenario horizon");
        return fam;
    }
    throw Error(ErrorKind::UnknownShapeTag, "unknown family type '" + type + "' at " + n.path);
}

Check parse_check(const Node& n) {
    static const std::map<std::string, Check> names{{"constraint", Check::constraint},
                                                    {"normal", Check::normal},
                                                    {"ball_bound", Check::ball_bound},
                                                    {"cone_bound", Check::cone_bound},
                                                    {"cauchy", Check::cauchy}};
    const std::string s = n.str();
    const auto it = names.find(s);
    if (it == names.end()) schema_error(n.path, "unknown check '" + s + "'");
    return it->second;
}

std::optional<double> optional_radius(const Node& n) {
    if (!n.has("r")) return std::nullopt;
    return n.at("r").positive();
}

// ---- serialization

json number_or_null(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json to_json(double v) { return v; }

bool is_zero(double v) { return v == 0.0; }
bool is_zero(const Vector& v) { return v.isZero(0.0); }

template <class V>
json path_json(const Path<V>& p) {
    const auto& pieces = p.pieces();
    if (pieces.size() == 1 && std::isinf(pieces[0].from) && std::isinf(pieces[0].to)) {
        if (is_zero(pieces[0].rate)) return {{"type", "constant"}, {"value", to_json(pieces[0].offset)}};
        return {{"type", "linear"}, {"offset", to_json(pieces[0].offset)}, {"rate", to_json(pieces[0].rate)}};
    }
    json arr = json::array();
    for (const auto& q : pieces) {
        arr.push_back({{"from", number_or_null(q.from)},
                       {"to", number_or_null(q.to)},
                       {"offset", to_json(q.offset)},
                       {"rate", to_json(q.rate)}});
    }
    return {{"type", "piecewise"}, {"pieces", arr}};
}

json shape_json(const ProxSet& set) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HalfSpace>) {
                return {{"type", "half_space"}, {"a", to_json(s.a)}, {"b", s.b}};
            } else if constexpr (std::is_same_v<T, Ball>) {
                return {{"type", "ball"}, {"center", to_json(s.center)}, {"radius", s.radius}};
            } else if constexpr (std::is_same_v<T, Box>) {
                return {{"type", "box"}, {"lo", to_json(s.lo)}, {"hi", to_json(s.hi)}};
            } else if constexpr (std::is_same_v<T, Polytope>) {
                json faces = json::array();
                for (const auto& f : s.faces) faces.push_back({{"a", to_json(f.a)}, {"b", f.b}});
                return {{"type", "polytope"}, {"faces", faces}};
            } else if constexpr (std::is_same_v<T, BallComplement>) {
                return {{"type", "ball_complement"}, {"center", to_json(s.center)}, {"radius", s.radius}};
            } else {
                json rows = json::array();
                for (Eigen::Index i = 0; i < s.rotation.rows(); ++i) rows.push_back(to_json(Vector(s.rotation.row(i).transpose())));
                return {{"type", "rigid_image"},
                        {"base", shape_json(*s.base)},
                        {"rotation", rows},
                        {"translation", to_json(s.translation)}};
            }
        },
        set.shape());
}

json family_json(const MovingFamily& fam) {
    return std::visit(
        [](const auto& k) -> json {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, TranslateFamily>) {
                return {{"type", "translate"}, {"base", shape_json(k.base)}, {"path", path_json(k.path)}};
            } else if constexpr (std::is_same_v<T, RigidFamily>) {
                return {{"type", "rigid"},
                        {"base", shape_json(k.base)},
                        {"angle", path_json(k.angle)},
                        {"shift", path_json(k.shift)}};
            } else if constexpr (std::is_same_v<T, RadiusFamily>) {
                return {{"type", "radius"},
                        {"center", path_json(k.center)},
                        {"radius", path_json(k.radius)},
                        {"complement", k.complement}};
            } else {
                json arr = json::array();
                for (const auto& p : k.pieces) {
                    arr.push_back({{"from", p.from}, {"to", p.to}, {"family", family_json(*p.family)}});
                }
                return {{"type", "piecewise"}, {"pieces", arr}};
            }
        },
        fam.kind());
}

// ---- builtins

struct Builtin {
    const char* name;
    const char* text;
};

const Builtin kBuiltins[] = {
    {"static_ball", R"({
  "name": "static_ball",
  "description": "Stationary unit disc; the point never moves and every variation is zero.",
  "dim": 2,
  "horizon": 1,
  "y0": [0.5, 0],
  "family": {"type": "stationary", "set": {"type": "ball", "center": [0, 0], "radius": 1}},
  "schedule": {"eps0": 0.1, "ratio": 0.5, "levels": 5},
  "checks": ["constraint", "normal", "ball_bound", "cauchy"],
  "ball_bound": {"w": [0, 0], "rho": 0.6},
  "seed": 1
})"},
    {"sweep_halfspace", R"({
  "name": "sweep_halfspace",
  "description": "Half-plane x_0 <= 1 - t sweeping the origin (play operator); closed-form solution (min(0, 1 - t), 0).",
  "dim": 2,
  "horizon": 2,
  "y0": [0, 0],
  "family": {
    "type": "translate",
    "base": {"type": "half_space", "a": [1, 0], "b": 1},
    "path": {"type": "linear", "offset": [0, 0], "rate": [-1, 0]}
  },
  "schedule": {"eps0": 0.1, "ratio": 0.3333333333333333, "levels": 6, "refinement": 3},
  "checks": ["constraint", "normal", "cauchy"],
  "seed": 1
})"},
    {"shrinking_ball_inner_cert", R"({
  "name": "shrinking_ball_inner_cert",
  "description": "Disc of radius 1 - 0.4t with a certified inner ball B_0.5(0); ball variation bound with (|y0 - w| + rho)^2 < 2 r rho.",
  "dim": 2,
  "horizon": 1,
  "y0": [0.9, 0.3],
  "family": {
    "type": "radius",
    "center": {"type": "constant", "value": [0, 0]},
    "radius": {"type": "linear", "offset": 1, "rate": -0.4}
  },
  "schedule": {"eps0": 0.1, "ratio": 0.5, "levels": 5},
  "checks": ["constraint", "normal", "ball_bound"],
  "ball_bound": {"w": [0, 0], "rho": 0.5, "r": 3},
  "seed": 1
})"},
    {"moving_obstacle", R"({
  "name": "moving_obstacle",
  "description": "Closed exterior of a disc of radius 0.5 passing through the start point; nonconvex with r = 0.5.",
  "dim": 2,
  "horizon": 2,
  "y0": [0, 0.2],
  "family": {
    "type": "radius",
    "center": {"type": "linear", "offset": [-1, 0], "rate": [1, 0]},
    "radius": {"type": "constant", "value": 0.5},
    "complement": true
  },
  "schedule": {"eps0": 0.1, "ratio": 0.5, "levels": 6},
  "checks": ["constraint", "normal", "cone_bound", "cauchy"],
  "cone_bound": {"R": 0.5, "d": 0.6},
  "seed": 1
})"},
    {"polytope_rotation", R"({
  "name": "polytope_rotation",
  "description": "Square [-1, 1]^2 spinning at unit angular speed while drifting right; Dykstra projections and the cone bound.",
  "dim": 2,
  "horizon": 2,
  "y0": [0.9, 0.9],
  "family": {
    "type": "rigid",
    "base": {
      "type": "polytope",
      "faces": [
        {"a": [1, 0], "b": 1},
        {"a": [-1, 0], "b": 1},
        {"a": [0, 1], "b": 1},
        {"a": [0, -1], "b": 1}
      ]
    },
    "angle": {"type": "linear", "offset": 0, "rate": 1},
    "shift": {"type": "linear", "offset": [0, 0], "rate": [0.2, 0]}
  },
  "schedule": {"eps0": 0.1, "ratio": 0.5, "levels": 5},
  "checks": ["constraint", "normal", "cone_bound"],
  "cone_bound": {"R": 1, "d": 1.42},
  "seed": 1
})"},
    {"jump_expansion", R"({
  "name": "jump_expansion",
  "description": "Shrinking disc that jumps outward at t = 1: Hausdorff-discontinuous but excess-continuous, so the modulus ignores the jump.",
  "dim": 2,
  "horizon": 2,
  "y0": [0.6, 0.6],
  "family": {
    "type": "piecewise",
    "pieces": [
      {"from": 0, "to": 1, "family": {
        "type": "radius",
        "center": {"type": "constant", "value": [0, 0]},
        "radius": {"type": "linear", "offset": 1, "rate": -0.4}
      }},
      {"from": 1, "to": 2, "family": {
        "type": "radius",
        "center": {"type": "constant", "value": [0, 0]},
        "radius": {"type": "linear", "offset": 1.5, "rate": -0.5}
      }}
    ]
  },
  "schedule": {"eps0": 0.1, "ratio": 0.5, "levels": 6},
  "checks": ["constraint", "normal", "cauchy"],
  "seed": 1
})"},
};

}  // namespace

std::string to_string(Check c) {
    switch (c) {
        case Check::constraint: return "constraint";
        case Check::normal: return "normal";
        case Check::ball_bound: return "ball_bound";
        case Check::cone_bound: return "cone_bound";
        case Check::cauchy: return "cauchy";
    }
    return "?";
}

bool Scenario::enabled(Check c) const { return std::find(checks.begin(), checks.end(), c) != checks.end(); }

bool operator==(const Scenario& l, const Scenario& r) {
    return l.name == r.name && l.description == r.description && l.dim == r.dim && l.horizon == r.horizon &&
           l.family == r.family && same(l.y0, r.y0) && l.schedule == r.schedule && l.checks == r.checks &&
           l.ball_bound == r.ball_bound && l.cone_bound == r.cone_bound && l.seed == r.seed &&
           l.samples_per_step == r.samples_per_step;
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports a byte offset; turn it into a line number
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw Error(ErrorKind::SchemaError, "line " + std::to_string(line) + ": " + e.what());
    }
    const Node root{doc, ""};
    if (!doc.is_object()) schema_error("", "expected an object");

    const std::string name = root.at("name").str();
    const std::string description = root.has("description") ? root.at("description").str() : "";
    const auto dim_raw = root.at("dim").count();
    if (dim_raw == 0) schema_error("/dim", "must be at least 1");
    const auto dim = static_cast<Eigen::Index>(dim_raw);
    const double horizon = root.at("horizon").positive();
    const Vector y0 = root.at("y0").vec(dim);
    MovingFamily family = parse_family(root.at("family"), dim, horizon);

    ScheduleSpec sched;
    const Node s = root.at("schedule");
    sched.eps.eps0 = s.at("eps0").positive();
    sched.eps.ratio = s.at("ratio").positive();
    if (!(sched.eps.ratio < 1.0)) schema_error(s.path + "/ratio", "must lie in (0, 1)");
    sched.levels = static_cast<int>(s.at("levels").count());
    if (sched.levels < 1) schema_error(s.path + "/levels", "must be at least 1");
    if (s.has("refinement")) sched.refinement = s.at("refinement").count();
    if (sched.refinement < 2) schema_error(s.path + "/refinement", "must be at least 2");
    if (s.has("base_intervals")) sched.base_intervals = s.at("base_intervals").count();
    if (sched.base_intervals < 1) schema_error(s.path + "/base_intervals", "must be at least 1");

    std::vector<Check> checks;
    if (root.has("checks")) {
        const Node c = root.at("checks");
        for (std::size_t i = 0; i < c.size(); ++i) checks.push_back(parse_check(c.item(i)));
    }

    std::optional<BallBoundSpec> ball;
    if (root.has("ball_bound")) {
        const Node b = root.at("ball_bound");
        ball = BallBoundSpec{b.at("w").vec(dim), b.at("rho").positive(), optional_radius(b)};
    }
    std::optional<ConeBoundSpec> cone;
    if (root.has("cone_bound")) {
        const Node c = root.at("cone_bound");
        cone = ConeBoundSpec{c.at("R").positive(), c.at("d").positive(), optional_radius(c)};
    }
    if (std::find(checks.begin(), checks.end(), Check::ball_bound) != checks.end() && !ball) {
        schema_error("/ball_bound", "required by the ball_bound check");
    }
    if (std::find(checks.begin(), checks.end(), Check::cone_bound) != checks.end() && !cone) {
        schema_error("/cone_bound", "required by the cone_bound check");
    }

    Scenario out{.name = name,
                 .description = description,
                 .dim = dim,
                 .horizon = horizon,
                 .family = std::move(family),
                 .y0 = y0,
                 .schedule = sched,
                 .checks = std::move(checks),
                 .ball_bound = std::move(ball),
                 .cone_bound = cone};
    if (root.has("seed")) out.seed = root.at("seed").count();
    if (root.has("samples_per_step")) {
        out.samples_per_step = root.at("samples_per_step").count();
        if (out.samples_per_step == 0) schema_error("/samples_per_step", "must be positive");
    }

    const ProxSet start = out.family.slice(0.0);
    if (!start.contains(out.y0)) {
        throw Error(ErrorKind::InfeasibleInitialPoint,
                    "y0 lies outside C(0): containment defect " + std::to_string(start.defect(out.y0)));
    }
    return out;
}

std::string serialize_scenario(const Scenario& s) {
    json doc;
    doc["name"] = s.name;
    if (!s.description.empty()) doc["description"] = s.description;
    doc["dim"] = s.dim;
    doc["horizon"] = s.horizon;
    doc["y0"] = to_json(s.y0);
    doc["family"] = family_json(s.family);
    json sched{{"eps0", s.schedule.eps.eps0},
               {"ratio", s.schedule.eps.ratio},
               {"levels", s.schedule.levels},
               {"refinement", s.schedule.refinement},
               {"base_intervals", s.schedule.base_intervals}};
    doc["schedule"] = sched;
    json checks = json::array();
    for (Check c : s.checks) checks.push_back(to_string(c));
    doc["checks"] = checks;
    if (s.ball_bound) {
        json b{{"w", to_json(s.ball_bound->w)}, {"rho", s.ball_bound->rho}};
        if (s.ball_bound->r) b["r"] = *s.ball_bound->r;
        doc["ball_bound"] = b;
    }
    if (s.cone_bound) {
        json c{{"R", s.cone_bound->R}, {"d", s.cone_bound->d}};
        if (s.cone_bound->r) c["r"] = *s.cone_bound->r;
        doc["cone_bound"] = c;
    }
    doc["seed"] = s.seed;
    doc["samples_per_step"] = s.samples_per_step;
    return doc.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> list_builtins() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& b : kBuiltins) {
        out.emplace_back(b.name, json::parse(b.text).at("description").get<std::string>());
    }
    return out;
}

bool is_builtin(const std::string& name) {
    return std::any_of(std::begin(kBuiltins), std::end(kBuiltins), [&](const Builtin& b) { return name == b.name; });
}

std::string builtin_text(const std::string& name) {
    for (const auto& b : kBuiltins) {
        if (name == b.name) return b.text;
    }
    throw Error(ErrorKind::InvalidArgument, "no builtin scenario named '" + name + "'");
}

Scenario load_scenario(const std::string& name_or_path) {
    if (is_builtin(name_or_path)) return parse_scenario(builtin_text(name_or_path));
    std::ifstream in(name_or_path);
    if (!in) throw Error(ErrorKind::IoError, "cannot read '" + name_or_path + "' (not a file or builtin name)");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

std::uint64_t effective_seed(const Scenario& s) {
    if (const char* env = std::getenv("SWEEP_SEED"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0') return v;
        throw Error(ErrorKind::InvalidArgument, std::string("SWEEP_SEED is not an integer: ") + env);
    }
    return s.seed;
}

}  // namespace sweep
