#include "qvortex/runner.hpp"

#include "qvortex/evolution.hpp"
#include "qvortex/grid_io.hpp"
#include "qvortex/madelung.hpp"
#include "qvortex/radiation.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>

namespace qvx {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string path_join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError(IoReason::open_failed, "cannot create output directory " + out_dir);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError(IoReason::open_failed, "cannot open " + path);
    os << text;
    if (!os) throw IoError(IoReason::write_failed, "write failed for " + path);
}

json read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError(IoReason::open_failed, "cannot open " + path);
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw IoError(IoReason::malformed, path + ": " + e.what());
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json constants_to_json(const PhysicalConstants& c) {
    return json{{"hbar", c.hbar}, {"mass", c.mass}, {"charge", c.charge}, {"c", c.c}};
}

PhysicalConstants constants_from_json(const json& j) {
    PhysicalConstants c;
    c.hbar = j.at("hbar").get<double>();
    c.mass = j.at("mass").get<double>();
    c.charge = j.at("charge").get<double>();
    c.c = j.at("c").get<double>();
    return c;
}

struct BuiltGeometry {
    std::shared_ptr<const Link> link;
    std::shared_ptr<const SeifertMesh> mesh;  // null when the cut is analytic
    FlowPotential phi_f;
    std::string description;
};

/// Azimuthal potential of a straight vortex along an axis: gamma * phi / 2pi
/// with phi in (-pi, pi]; the cut half-plane sits at phi = pi.
FlowPotential azimuthal_potential(const Vec3& axis_point, const Vec3& axis_direction,
                                  double gamma) {
    const Vec3 axis = normalized(axis_direction);
    Vec3 seed = std::abs(axis.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 e1 = normalized(seed - dot(seed, axis) * axis);
    const Vec3 e2 = cross(axis, e1);
    const double coeff = gamma / (2.0 * std::numbers::pi);
    return [=](const Vec3& x) {
        const Vec3 rel = x - axis_point;
        return coeff * std::atan2(dot(rel, e2), dot(rel, e1));
    };
}

BuiltGeometry build_geometry(const RunConfig& cfg) {
    BuiltGeometry out;
    const double gamma = cfg.effective_gamma();
    switch (cfg.geometry.type) {
        case GeometryType::ring: {
            auto circle = circle_curve(cfg.geometry.radius, cfg.geometry.center,
                                       cfg.geometry.normal, cfg.geometry.samples);
            auto mesh = std::make_shared<SeifertMesh>(disk_mesh(circle, cfg.geometry.rings));
            auto link = std::make_shared<Link>(Link{{std::move(circle)}, gamma});
            if (gamma != 0.0) {
                auto cut = std::make_shared<CutPotential>(mesh, gamma);
                out.phi_f = [cut](const Vec3& x) { return cut->phi(x); };
            }
            out.link = std::move(link);
            out.mesh = std::move(mesh);
            out.description = "ring";
            break;
        }
        case GeometryType::trefoil: {
            auto curve = trefoil_curve(cfg.geometry.samples);
            auto link = std::make_shared<Link>(Link{{std::move(curve)}, gamma});
            if (gamma != 0.0) {
                if (cfg.geometry.mesh_path.empty())
                    throw ConfigError("config: a Seifert mesh is required for the "
                                      "multi-valued potential of a knotted filament");
                auto mesh = std::make_shared<SeifertMesh>(
                    load_seifert_mesh(cfg.geometry.mesh_path, *link, cfg.geometry.mesh_tol));
                auto cut = std::make_shared<CutPotential>(mesh, gamma);
                out.phi_f = [cut](const Vec3& x) { return cut->phi(x); };
                out.mesh = std::move(mesh);
            }
            out.link = std::move(link);
            out.description = "trefoil";
            break;
        }
        case GeometryType::line:
        case GeometryType::solenoid: {
            auto line = line_filament(cfg.geometry.axis_direction, cfg.geometry.axis_point,
                                      cfg.geometry.half_length, cfg.geometry.samples);
            out.link = std::make_shared<Link>(Link{{std::move(line)}, gamma});
            if (gamma != 0.0)
                out.phi_f = azimuthal_potential(cfg.geometry.axis_point,
                                                cfg.geometry.axis_direction, gamma);
            out.description =
                cfg.geometry.type == GeometryType::line ? "line" : "solenoid";
            break;
        }
    }
    if (!out.phi_f) out.phi_f = [](const Vec3&) { return 0.0; };
    return out;
}

std::string snapshot_name(const std::string& prefix, int step) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_snap_%06d.qvg1", prefix.c_str(), step);
    return buf;
}

RunConfig load_with_overrides(const std::string& config_path, const RunOptions& opts) {
    RunConfig cfg = load_config(config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.threads) cfg.threads = *opts.threads;
    return cfg;
}

}  // namespace

void cmd_build(const std::string& config_path, const std::string& out_dir,
               const RunOptions& opts) {
    const RunConfig cfg = load_with_overrides(config_path, opts);
    ensure_out_dir(out_dir);

    const double gamma = cfg.effective_gamma();
    const BuiltGeometry geom = build_geometry(cfg);

    const MultiValuedState state =
        build_initial_state(cfg.grid, cfg.envelope, geom.link, geom.phi_f,
                            cfg.regularizer_n, cfg.constants);

    const QuantizationReport quant = quantization_check(gamma, cfg.constants);

    json meta;
    meta["gamma"] = gamma;
    meta["n"] = cfg.regularizer_n;
    meta["constants"] = constants_to_json(cfg.constants);
    meta["M"] = cfg.m_index;
    meta["sheet"] = state.sheet;
    meta["geometry"] = geom.description;
    meta["envelope"] = {{"width", cfg.envelope.width},
                        {"center", {state.envelope.center->x, state.envelope.center->y,
                                    state.envelope.center->z}}};
    meta["quantization"] = {{"k_nearest", quant.k_nearest},
                            {"residual", quant.residual},
                            {"single_valued", quant.single_valued}};

    const std::string state_file = cfg.output_prefix + "_state.qvg1";
    write_grid(state.psi, path_join(out_dir, state_file));
    meta["state_file"] = state_file;

    if (gamma != 0.0) {
        const NuSelection sel = select_nu(gamma, cfg.constants, cfg.m_index);
        meta["nu"] = sel.nu;
        meta["nu_linear"] = sel.linear;
        const ComplexGrid3 psi_nu = make_nu_state(state, sel.nu);
        const std::string nu_file = cfg.output_prefix + "_state_nu.qvg1";
        write_grid(psi_nu, path_join(out_dir, nu_file));
        meta["state_nu_file"] = nu_file;
    } else {
        meta["nu"] = 1.0;
        meta["nu_linear"] = true;
    }

    write_text(path_join(out_dir, cfg.output_prefix + "_meta.json"), meta.dump(2) + "\n");
}

void cmd_evolve(const std::string& config_path, const std::string& out_dir,
                const RunOptions& opts) {
    const RunConfig cfg = load_with_overrides(config_path, opts);
    if (!cfg.evolve)
        throw ConfigError("config: evolve section is required for the evolve command");
    const EvolveSection& section = *cfg.evolve;

    const std::string meta_path = path_join(out_dir, cfg.output_prefix + "_meta.json");
    const json meta = read_json(meta_path);
    const PhysicalConstants constants = constants_from_json(meta.at("constants"));
    const double nu = meta.at("nu").get<double>();

    const bool linear_mode =
        section.mode == EvolveSection::Mode::linear ||
        (section.mode == EvolveSection::Mode::automatic && nu == 1.0);

    // The nonlinear solver integrates the transformed single-valued field;
    // the linear solver integrates the reference sheet itself.
    std::string input_file;
    if (linear_mode) {
        input_file = meta.at("state_file").get<std::string>();
    } else {
        if (!meta.contains("state_nu_file"))
            throw ConfigError("config: nonlinear evolution needs the transformed state; "
                              "built state has gamma = 0");
        input_file = meta.at("state_nu_file").get<std::string>();
    }

    EvolveConfig econf;
    econf.dt = section.dt;
    econf.steps = section.steps;
    econf.snapshot_stride = section.snapshot_stride;
    econf.nu = linear_mode ? 1.0 : nu;
    if (section.potential.type == PotentialConfig::Type::harmonic)
        econf.potential = HarmonicPotential{section.potential.omega, section.potential.center};

    ComplexGrid3 psi0 = read_grid(path_join(out_dir, input_file));
    int step_offset = 0;
    std::vector<Snapshot> prior_snapshots;
    std::vector<MonitorRow> prior_monitors;

    const std::string manifest_path =
        path_join(out_dir, cfg.output_prefix + "_manifest.json");
    if (section.resume && fs::exists(manifest_path)) {
        const json manifest = read_json(manifest_path);
        const auto& snaps = manifest.at("snapshots");
        if (!snaps.empty()) {
            const auto& last = snaps.back();
            step_offset = last.at("step").get<int>();
            if (step_offset >= section.steps) return;  // nothing left to do
            psi0 = read_grid(path_join(out_dir, last.at("file").get<std::string>()));
            for (const auto& s : snaps)
                prior_snapshots.push_back(
                    {s.at("step").get<int>(), s.at("t").get<double>(), ComplexGrid3()});
            for (const auto& row : manifest.at("monitors"))
                prior_monitors.push_back({row.at("step").get<int>(), row.at("t").get<double>(),
                                          row.at("norm").get<double>(),
                                          row.at("energy").get<double>(),
                                          row.at("mask_fraction").get<double>()});
        }
    }

    EvolveConfig chunk = econf;
    chunk.steps = section.steps - step_offset;
    const EvolveResult result = linear_mode ? evolve_linear(psi0, chunk, constants)
                                            : evolve_nonlinear(psi0, chunk, constants);

    ensure_out_dir(out_dir);
    json manifest;
    manifest["dt"] = econf.dt;
    manifest["steps"] = section.steps;
    manifest["snapshot_stride"] = econf.snapshot_stride;
    manifest["nu"] = econf.nu;
    manifest["mode"] = linear_mode ? "linear" : "nonlinear";
    manifest["constants"] = constants_to_json(constants);
    manifest["seed"] = cfg.seed;
    manifest["threads"] = cfg.threads;

    json snaps = json::array();
    json monitor_rows = json::array();
    std::string monitors_csv = "step,t,norm,energy,mask_fraction\n";

    auto add_monitor = [&](const MonitorRow& row) {
        monitor_rows.push_back({{"step", row.step},
                                {"t", row.t},
                                {"norm", row.norm},
                                {"energy", row.energy},
                                {"mask_fraction", row.mask_fraction}});
        monitors_csv += std::to_string(row.step) + "," + format_double(row.t) + "," +
                        format_double(row.norm) + "," + format_double(row.energy) + "," +
                        format_double(row.mask_fraction) + "\n";
    };
    auto add_snapshot_entry = [&](int step, double t, const std::string& file) {
        snaps.push_back({{"step", step}, {"t", t}, {"file", file}});
    };

    for (std::size_t i = 0; i < prior_snapshots.size(); ++i)
        add_snapshot_entry(prior_snapshots[i].step, prior_snapshots[i].t,
                           snapshot_name(cfg.output_prefix, prior_snapshots[i].step));
    for (const auto& row : prior_monitors) add_monitor(row);

    // Offset resumed chunks onto the absolute step axis; skip the duplicate
    // initial snapshot when continuing.
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
        const auto& snap = result.snapshots[i];
        const int abs_step = snap.step + step_offset;
        const double abs_t = abs_step * econf.dt;
        if (step_offset > 0 && i == 0) continue;
        const std::string file = snapshot_name(cfg.output_prefix, abs_step);
        write_grid(snap.psi, path_join(out_dir, file));
        add_snapshot_entry(abs_step, abs_t, file);
        const auto& row = result.monitors[i];
        add_monitor({abs_step, abs_t, row.norm, row.energy, row.mask_fraction});
    }

    manifest["snapshots"] = snaps;
    manifest["monitors"] = monitor_rows;
    const std::string csv_file = cfg.output_prefix + "_monitors.csv";
    manifest["monitors_csv"] = csv_file;
    write_text(path_join(out_dir, csv_file), monitors_csv);
    write_text(manifest_path, manifest.dump(2) + "\n");
}

void cmd_radiate(const std::string& config_path, const std::string& out_dir,
                 const RunOptions& opts) {
    const RunConfig cfg = load_with_overrides(config_path, opts);
    const std::string manifest_path =
        path_join(out_dir, cfg.output_prefix + "_manifest.json");
    if (!fs::exists(manifest_path))
        throw IoError(IoReason::open_failed,
                      "radiate: no evolution manifest at " + manifest_path +
                          "; run evolve first");
    const json manifest = read_json(manifest_path);
    const PhysicalConstants constants = constants_from_json(manifest.at("constants"));
    const double nu = manifest.at("nu").get<double>();

    std::vector<ComplexGrid3> series;
    std::vector<double> times;
    for (const auto& s : manifest.at("snapshots")) {
        series.push_back(read_grid(path_join(out_dir, s.at("file").get<std::string>())));
        times.push_back(s.at("t").get<double>());
    }
    if (series.size() < 2)
        throw IoError(IoReason::malformed, "radiate: manifest lists fewer than 2 snapshots");

    const PowerSeries power = radiated_power_series(series, times, nu, constants);

    std::string csv = "t,P,emitted,mask_fraction\n";
    for (std::size_t i = 0; i < power.times.size(); ++i)
        csv += format_double(power.times[i]) + "," + format_double(power.power[i]) + "," +
               format_double(power.emitted[i]) + "," +
               format_double(power.mask_fraction[i]) + "\n";
    const std::string csv_file = cfg.output_prefix + "_power.csv";
    write_text(path_join(out_dir, csv_file), csv);

    double mask_max = 0.0;
    for (double m : power.mask_fraction) mask_max = std::max(mask_max, m);
    json summary;
    summary["nu"] = nu;
    summary["delta_e"] = power.total_emitted();
    summary["rows"] = power.times.size();
    summary["mask_fraction_max"] = mask_max;
    summary["power_csv"] = csv_file;
    write_text(path_join(out_dir, cfg.output_prefix + "_radiation.json"),
               summary.dump(2) + "\n");
}

void cmd_verify(const std::string& config_path, const std::string& out_dir,
                const RunOptions& opts) {
    const RunConfig cfg = load_with_overrides(config_path, opts);
    ensure_out_dir(out_dir);

    const VerifyReport report = verify_suite(cfg.verify_grid.value_or(32), cfg.seed);

    json doc;
    doc["all_pass"] = report.all_pass;
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"value", c.value},
                          {"threshold", c.threshold}});
    doc["checks"] = checks;
    write_text(path_join(out_dir, cfg.output_prefix + "_verify.json"), doc.dump(2) + "\n");

    if (!report.all_pass) {
        std::size_t failures = 0;
        for (const auto& c : report.checks)
            if (!c.pass) ++failures;
        throw NumericError("verify: " + std::to_string(failures) + " checks failed; see " +
                           cfg.output_prefix + "_verify.json");
    }
}

}  // namespace qvx
