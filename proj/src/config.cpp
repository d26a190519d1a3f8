#include "qvortex/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace qvx {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

void expect_keys(const json& obj, const std::string& path,
                 const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

double get_number(const json& obj, const std::string& path, const std::string& key,
                  std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required number");
    }
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key,
            std::optional<int> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required integer");
    }
    if (!obj[key].is_number_integer()) fail(path + "." + key, "expected an integer");
    return obj[key].get<int>();
}

Vec3 get_vec3(const json& obj, const std::string& path, const std::string& key,
              std::optional<Vec3> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required 3-vector");
    }
    const auto& a = obj[key];
    if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() ||
        !a[2].is_number())
        fail(path + "." + key, "expected an array of three numbers");
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       std::optional<std::string> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required string");
    }
    if (!obj[key].is_string()) fail(path + "." + key, "expected a string");
    return obj[key].get<std::string>();
}

PhysicalConstants parse_constants(const json& obj, const std::string& path) {
    expect_keys(obj, path, {"hbar", "mass", "charge", "c"});
    PhysicalConstants c;
    c.hbar = get_number(obj, path, "hbar", 1.0);
    c.mass = get_number(obj, path, "mass", 1.0);
    c.charge = get_number(obj, path, "charge", 1.0);
    c.c = get_number(obj, path, "c", 1.0);
    try {
        c.validate();
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return c;
}

GridSpec parse_grid(const json& obj, const std::string& path) {
    expect_keys(obj, path, {"dims", "origin", "spacing"});
    if (!obj.contains("dims") || !obj["dims"].is_array() || obj["dims"].size() != 3)
        fail(path + ".dims", "expected an array of three positive integers");
    GridSpec spec;
    for (int a = 0; a < 3; ++a) {
        if (!obj["dims"][a].is_number_integer() || obj["dims"][a].get<long long>() < 1)
            fail(path + ".dims", "expected positive integers");
        spec.dims[a] = obj["dims"][a].get<std::uint32_t>();
    }
    const Vec3 origin = get_vec3(obj, path, "origin");
    const Vec3 spacing = get_vec3(obj, path, "spacing");
    spec.origin = {origin.x, origin.y, origin.z};
    spec.spacing = {spacing.x, spacing.y, spacing.z};
    try {
        spec.validate();
    } catch (const Error& e) {
        fail(path, e.what());
    }
    return spec;
}

GeometryConfig parse_geometry(const json& obj, const std::string& path) {
    GeometryConfig g;
    const std::string type = get_string(obj, path, "type");
    if (type == "ring") {
        expect_keys(obj, path, {"type", "radius", "center", "normal", "samples", "rings"});
        g.type = GeometryType::ring;
        g.radius = get_number(obj, path, "radius", 1.0);
        g.center = get_vec3(obj, path, "center", Vec3{});
        g.normal = get_vec3(obj, path, "normal", Vec3{0, 0, 1});
        g.samples = get_int(obj, path, "samples", 256);
        g.rings = get_int(obj, path, "rings", 4);
    } else if (type == "trefoil") {
        expect_keys(obj, path, {"type", "samples", "mesh", "mesh_tol"});
        g.type = GeometryType::trefoil;
        g.samples = get_int(obj, path, "samples", 512);
        g.mesh_path = get_string(obj, path, "mesh", std::string());
        g.mesh_tol = get_number(obj, path, "mesh_tol", 1e-6);
    } else if (type == "line") {
        expect_keys(obj, path,
                    {"type", "samples", "axis_point", "axis_direction", "half_length"});
        g.type = GeometryType::line;
        g.samples = get_int(obj, path, "samples", 4097);
        g.axis_point = get_vec3(obj, path, "axis_point", Vec3{});
        g.axis_direction = get_vec3(obj, path, "axis_direction", Vec3{0, 0, 1});
        g.half_length = get_number(obj, path, "half_length", 1e4);
    } else if (type == "solenoid") {
        expect_keys(obj, path, {"type", "samples", "axis_point", "axis_direction",
                                "half_length", "radius", "flux"});
        g.type = GeometryType::solenoid;
        g.samples = get_int(obj, path, "samples", 4097);
        g.axis_point = get_vec3(obj, path, "axis_point", Vec3{});
        g.axis_direction = get_vec3(obj, path, "axis_direction", Vec3{0, 0, 1});
        g.half_length = get_number(obj, path, "half_length", 1e4);
        g.solenoid_radius = get_number(obj, path, "radius", 0.5);
        g.flux = get_number(obj, path, "flux");
    } else {
        fail(path + ".type", "unknown geometry type '" + type + "'");
    }
    return g;
}

PotentialConfig parse_potential(const json& obj, const std::string& path) {
    PotentialConfig p;
    const std::string type = get_string(obj, path, "type", std::string("none"));
    if (type == "none") {
        expect_keys(obj, path, {"type"});
        p.type = PotentialConfig::Type::none;
    } else if (type == "harmonic") {
        expect_keys(obj, path, {"type", "omega", "center"});
        p.type = PotentialConfig::Type::harmonic;
        p.omega = get_number(obj, path, "omega", 1.0);
        p.center = get_vec3(obj, path, "center", Vec3{});
        if (!(p.omega > 0.0)) fail(path + ".omega", "must be positive");
    } else {
        fail(path + ".type", "unknown potential type '" + type + "'");
    }
    return p;
}

EvolveSection parse_evolve(const json& obj, const std::string& path) {
    expect_keys(obj, path,
                {"dt", "steps", "snapshot_stride", "potential", "mode", "resume"});
    EvolveSection e;
    e.dt = get_number(obj, path, "dt");
    e.steps = get_int(obj, path, "steps");
    e.snapshot_stride = get_int(obj, path, "snapshot_stride", 10);
    if (obj.contains("potential")) e.potential = parse_potential(obj["potential"], path + ".potential");
    const std::string mode = get_string(obj, path, "mode", std::string("auto"));
    if (mode == "auto")
        e.mode = EvolveSection::Mode::automatic;
    else if (mode == "linear")
        e.mode = EvolveSection::Mode::linear;
    else if (mode == "nonlinear")
        e.mode = EvolveSection::Mode::nonlinear;
    else
        fail(path + ".mode", "expected auto, linear, or nonlinear");
    if (obj.contains("resume")) {
        if (!obj["resume"].is_boolean()) fail(path + ".resume", "expected a boolean");
        e.resume = obj["resume"].get<bool>();
    }
    if (!(e.dt > 0.0)) fail(path + ".dt", "must be positive");
    if (e.steps < 1) fail(path + ".steps", "must be >= 1");
    if (e.snapshot_stride < 1) fail(path + ".snapshot_stride", "must be >= 1");
    return e;
}

}  // namespace

double RunConfig::effective_gamma() const {
    if (gamma) return *gamma;
    if (geometry.type == GeometryType::solenoid) {
        SolenoidSpec spec;
        spec.axis_point = geometry.axis_point;
        spec.axis_direction = geometry.axis_direction;
        spec.radius = geometry.solenoid_radius;
        spec.flux = geometry.flux;
        return ab_effective_vorticity(spec, constants, phase_convention);
    }
    throw ConfigError("config: gamma is required unless the geometry is a solenoid");
}

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }

    expect_keys(root, "$",
                {"seed", "threads", "constants", "grid", "geometry", "gamma", "envelope",
                 "n", "M", "phase_convention", "evolve", "verify_grid", "output_prefix"});

    RunConfig cfg;
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
            fail("$.seed", "expected a non-negative integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    cfg.threads = get_int(root, "$", "threads", 1);
    if (cfg.threads < 1) fail("$.threads", "must be >= 1");

    if (root.contains("constants"))
        cfg.constants = parse_constants(root["constants"], "$.constants");

    if (!root.contains("grid")) fail("$.grid", "missing required section");
    cfg.grid = parse_grid(root["grid"], "$.grid");

    if (!root.contains("geometry")) fail("$.geometry", "missing required section");
    cfg.geometry = parse_geometry(root["geometry"], "$.geometry");

    if (root.contains("gamma")) {
        if (!root["gamma"].is_number()) fail("$.gamma", "expected a number");
        cfg.gamma = root["gamma"].get<double>();
    }

    if (root.contains("envelope")) {
        expect_keys(root["envelope"], "$.envelope", {"width", "center"});
        cfg.envelope.width = get_number(root["envelope"], "$.envelope", "width");
        if (!(cfg.envelope.width > 0.0)) fail("$.envelope.width", "must be positive");
        if (root["envelope"].contains("center"))
            cfg.envelope.center = get_vec3(root["envelope"], "$.envelope", "center");
    }

    cfg.regularizer_n = get_int(root, "$", "n", 2);
    if (cfg.regularizer_n < 2) fail("$.n", "must be >= 2 for a nodal filament");
    cfg.m_index = get_int(root, "$", "M", 1);
    if (cfg.m_index < 1) fail("$.M", "must be a positive integer");

    if (root.contains("phase_convention")) {
        const std::string pc = get_string(root, "$", "phase_convention");
        if (pc == "hbar_only")
            cfg.phase_convention = FluxPhaseConvention::hbar_only;
        else if (pc == "gaussian")
            cfg.phase_convention = FluxPhaseConvention::gaussian;
        else
            fail("$.phase_convention", "expected hbar_only or gaussian");
    }

    if (root.contains("evolve")) cfg.evolve = parse_evolve(root["evolve"], "$.evolve");

    if (root.contains("verify_grid")) {
        if (!root["verify_grid"].is_number_integer() || root["verify_grid"].get<int>() < 8)
            fail("$.verify_grid", "expected an integer >= 8");
        cfg.verify_grid = root["verify_grid"].get<std::uint32_t>();
    }

    cfg.output_prefix = get_string(root, "$", "output_prefix", std::string("run"));
    if (cfg.output_prefix.empty() ||
        cfg.output_prefix.find('/') != std::string::npos)
        fail("$.output_prefix", "must be a non-empty file-name prefix");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError(IoReason::open_failed, "config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

}  // namespace qvx
