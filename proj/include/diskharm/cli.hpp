/**
 * @file cli.hpp
 * @brief The `diskharm` command-line workbench.
 *
 * Subcommands: kernel, figure, transform, poisson, project, norms, verify,
 * conjecture. Exit codes: 0 success, 1 verification failure, 2 usage or
 * input error, 3 numerical failure (non-convergence, non-finite values, or a
 * failed --reload round trip).
 */
#pragma once

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "diskharm/diskharm.hpp"

namespace diskharm::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

/// Raised for usage problems the argument parser cannot catch by itself.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A --reload round trip that did not reproduce the written field.
class ReloadMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Parse a prefactor: a decimal number, or `pi`, `a/pi`, `a*pi`, `pi/a`.
 *
 * `2/pi` yields exactly the double 2.0 / pi used by the figure catalog.
 */
inline double parse_prefactor(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty() || !std::isfinite(v)) {
            throw UsageError("--prefactor: cannot read '" + text + "' (use a number, pi, a/pi, a*pi or pi/a)");
        }
        return v;
    };
    if (text == "pi") {
        return kPi;
    }
    if (const auto p = text.find("/pi"); p != std::string::npos && p + 3 == text.size()) {
        return number(text.substr(0, p)) / kPi;
    }
    if (const auto p = text.find("*pi"); p != std::string::npos && p + 3 == text.size()) {
        return number(text.substr(0, p)) * kPi;
    }
    if (text.rfind("pi/", 0) == 0) {
        return kPi / number(text.substr(3));
    }
    return number(text);
}

struct GridOptions {
    double r_max = 0.9;
    int n_r = 40;
    int n_theta = 128;
    double tol = 1e-9;

    [[nodiscard]] EvaluationGrid grid() const { return EvaluationGrid::uniform(r_max, n_r, n_theta); }
    [[nodiscard]] QuadratureSpec quadrature() const {
        QuadratureSpec q;
        q.adaptive_tol = tol;
        q.max_evaluation_radius = std::max(q.max_evaluation_radius, r_max);
        q.validate();
        return q;
    }
};

struct OutputOptions {
    bool reload = false;
    bool timestamp = false;
};

class Workbench {
public:
    Workbench(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv) {
        CLI::App app{"diskharm: reproducing-kernel transforms on the unit disk"};
        app.require_subcommand(1);
        app.set_version_flag("--version", std::string(version()));
        build(app);
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out_ << app.help();
            return kSuccess;
        } catch (const CLI::CallForAllHelp&) {
            out_ << app.help("", CLI::AppFormatMode::All);
            return kSuccess;
        } catch (const CLI::CallForVersion&) {
            out_ << version() << "\n";
            return kSuccess;
        } catch (const CLI::ParseError& e) {
            err_ << "usage error: " << e.what() << "\n";
            if (const auto* sub = selected(app)) {
                err_ << "run '" << app.get_name() << " " << sub->get_name() << " --help' for the flags\n";
            } else {
                err_ << "run with --help for the list of subcommands\n";
            }
            return kUsageError;
        }
        return dispatch();
    }

private:
    static const char* version() {
#ifdef DISKHARM_VERSION
        return DISKHARM_VERSION;
#else
        return "0.0.0";
#endif
    }

    static const CLI::App* selected(const CLI::App& app) {
        for (const auto* s : app.get_subcommands()) {
            return s;
        }
        return nullptr;
    }

    void add_grid_flags(CLI::App* sub) {
        sub->add_option("--r-max", grid_.r_max, "largest evaluation radius, at most 0.99")
            ->capture_default_str()
            ->check(CLI::Range(1e-6, 0.99));
        sub->add_option("--n-r", grid_.n_r, "number of radii from 0 to r_max")->capture_default_str()->check(
            CLI::PositiveNumber);
        sub->add_option("--n-theta", grid_.n_theta, "number of angles covering [-pi, pi)")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        add_tol_flag(sub);
    }
    void add_tol_flag(CLI::App* sub) {
        sub->add_option("--tol", grid_.tol, "absolute adaptive-quadrature tolerance per panel")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    }
    void add_output_flags(CLI::App* sub) {
        sub->add_flag("--reload", output_.reload, "re-read every written grid file and compare bit for bit");
        sub->add_flag("--timestamp", output_.timestamp, "record the wall-clock time in metadata sidecars");
    }

    void build(CLI::App& app) {
        auto* kernel = app.add_subcommand("kernel", "angular profiles of the Poisson or Q kernel");
        kernel->add_option("--kernel", kernel_name_, "poisson or q")
            ->capture_default_str()
            ->check(CLI::IsMember({"poisson", "q"}));
        kernel->add_option("--radii", kernel_radii_, "radii in [0, 0.99], one column each")->delimiter(',')->required();
        kernel->add_option("--samples", kernel_samples_, "angles from -pi to pi inclusive")
            ->capture_default_str()
            ->check(CLI::Range(2, 1000000));
        kernel->add_option("--out", out_path_, "output CSV")->capture_default_str();

        auto* figure = app.add_subcommand("figure", "compute the field(s) of a catalog figure (1-15)");
        figure->add_option("id", figure_id_, "figure id")->required()->check(CLI::Range(1, kFigureCount));
        figure->add_option("--out", out_dir_, "output directory")->capture_default_str();
        figure->add_option("--prefactor", prefactor_text_, "override the catalog prefactor of Q transforms");
        figure->add_option("--samples", kernel_samples_, "angles for kernel-profile figures")
            ->capture_default_str()
            ->check(CLI::Range(2, 1000000));
        add_grid_flags(figure);
        add_output_flags(figure);

        auto* transform = app.add_subcommand("transform", "Q transform or projection of a disk source");
        transform->add_option("--source-file", source_file_, "JSON source document")->required();
        transform->add_option("--operator", operator_, "q or project")
            ->capture_default_str()
            ->check(CLI::IsMember({"q", "project"}));
        transform->add_option("--prefactor", prefactor_text_, "Q-transform prefactor (q only; default 1), e.g. 2/pi");
        transform->add_option("--out", out_path_, "output CSV")->capture_default_str();
        add_grid_flags(transform);
        add_output_flags(transform);

        auto* poisson = app.add_subcommand("poisson", "Poisson integral of a boundary function");
        poisson->add_option("--source-file", source_file_, "JSON boundary document")->required();
        poisson->add_option("--out", out_path_, "output CSV")->capture_default_str();
        add_grid_flags(poisson);
        add_output_flags(poisson);

        auto* project = app.add_subcommand("project", "orthogonal projection of a disk source onto harmonic functions");
        project->add_option("--source-file", source_file_, "JSON source document")->required();
        project->add_option("--out", out_path_, "output CSV")->capture_default_str();
        add_grid_flags(project);
        add_output_flags(project);

        auto* norms = app.add_subcommand("norms", "norm of a source or boundary function");
        norms->add_option("--source-file", source_file_, "JSON source or boundary document")->required();
        norms->add_option("--kind", norm_kind_, "bergman, harmonic, hardy or circle")
            ->capture_default_str()
            ->check(CLI::IsMember({"bergman", "harmonic", "hardy", "circle"}));
        norms->add_option("--p", norm_p_, "exponent for bergman")->capture_default_str();
        norms->add_option("--alpha", norm_alpha_, "weight exponent for bergman")->capture_default_str();
        norms->add_option("--truncation", norm_truncation_, "disk-norm truncation radius, at most 0.999")
            ->capture_default_str();
        norms->add_option("--out", json_out_, "optional JSON output file");
        add_tol_flag(norms);

        auto* verify = app.add_subcommand("verify", "run the invariant suite; exit 1 if any invariant fails");
        verify->add_option("--r-max", verify_r_max_, "largest radius of the normalization check")
            ->capture_default_str()
            ->check(CLI::Range(0.0, 0.99));
        verify->add_option("--out", json_out_, "optional JSON report file");
        add_tol_flag(verify);

        auto* conj = app.add_subcommand("conjecture", "compare the steady heat distribution with the Q transform");
        auto* src = conj->add_option("--source-file", source_file_, "JSON source document");
        conj->add_option("--figure", figure_id_, "use the source of a catalog Q figure")->excludes(src);
        conj->add_option("--boundary", boundary_, "dirichlet, robin or both")
            ->capture_default_str()
            ->check(CLI::IsMember({"dirichlet", "robin", "both"}));
        conj->add_option("--robin-h", robin_h_, "Robin heat-transfer coefficient")->capture_default_str()->check(
            CLI::PositiveNumber);
        conj->add_option("--conductivity", conductivity_, "thermal conductivity")->capture_default_str()->check(
            CLI::PositiveNumber);
        conj->add_option("--mesh-n-r", mesh_.n_r, "heat mesh radial cells")->capture_default_str()->check(
            CLI::Range(16, 100000));
        conj->add_option("--mesh-n-theta", mesh_.n_theta, "heat mesh angular cells")->capture_default_str()->check(
            CLI::Range(16, 100000));
        conj->add_option("--out", out_dir_, "output directory")->capture_default_str();
        add_tol_flag(conj);
        add_output_flags(conj);

        app_subs_ = {kernel, figure, transform, poisson, project, norms, verify, conj};
    }

    int dispatch() {
        try {
            for (auto* s : app_subs_) {
                if (s->parsed()) {
                    return execute(s->get_name());
                }
            }
            return kUsageError;
        } catch (const UsageError& e) {
            err_ << "usage error: " << e.what() << "\n";
            return kUsageError;
        } catch (const ParseError& e) {
            err_ << "error: cannot read source document: " << e.what() << "\n";
            return kUsageError;
        } catch (const ValidationError& e) {
            err_ << "error: invalid source: " << e.what() << "\n";
            return kUsageError;
        } catch (const NonConvergence& e) {
            err_ << "numerical failure: " << e.what() << " (iterations " << e.iterations() << ", residual "
                 << e.achieved_residual() << ")\n";
            return kNumericalFailure;
        } catch (const NonFiniteError& e) {
            err_ << "numerical failure: " << e.what() << "\n";
            return kNumericalFailure;
        } catch (const ReloadMismatch& e) {
            err_ << "numerical failure: " << e.what() << "\n";
            return kNumericalFailure;
        } catch (const std::invalid_argument& e) {
            err_ << "usage error: " << e.what() << "\n";
            return kUsageError;
        } catch (const std::domain_error& e) {
            err_ << "usage error: " << e.what() << "\n";
            return kUsageError;
        } catch (const std::out_of_range& e) {
            err_ << "usage error: " << e.what() << "\n";
            return kUsageError;
        } catch (const std::exception& e) {
            err_ << "error: " << e.what() << "\n";
            return kNumericalFailure;
        }
    }

    int execute(const std::string& sub) {
        if (sub == "kernel") return cmd_kernel();
        if (sub == "figure") return cmd_figure();
        if (sub == "transform") return cmd_transform();
        if (sub == "poisson") return cmd_poisson();
        if (sub == "project") return cmd_project();
        if (sub == "norms") return cmd_norms();
        if (sub == "verify") return cmd_verify();
        return cmd_conjecture();
    }

    // ----- helpers -----

    void write_field(const std::string& path, const Field& f) {
        const std::filesystem::path p(path);
        if (p.has_parent_path()) {
            std::filesystem::create_directories(p.parent_path());
        }
        write_grid(path, f, {output_.timestamp});
        if (output_.reload) {
            const double diff = max_field_difference(f, read_grid(path));
            if (diff != 0.0) {
                throw ReloadMismatch("reload of " + path + " differs from the written field (max difference " +
                                     format_double(diff) + ")");
            }
        }
        if (!f.all_converged()) {
            const auto bad = std::count(f.converged.begin(), f.converged.end(), std::uint8_t{0});
            err_ << "warning: " << bad << " of " << f.values.size() << " points in " << path
                 << " did not converge (converged column is 0)\n";
        }
    }

    static nlohmann::json summary(const Field& f) {
        nlohmann::json j{{"max", f.max_value()}, {"min", f.min_value()}, {"all_converged", f.all_converged()}};
        if (f.grid.radii.front() == 0.0) {
            j["value_at_origin"] = f.at(0, 0);
        }
        return j;
    }

    void emit(const nlohmann::json& j) { out_ << j.dump(2) << "\n"; }

    std::string read_source_text() const {
        try {
            return read_text(source_file_);
        } catch (const std::runtime_error& e) {
            throw UsageError(std::string("--source-file: ") + e.what());
        }
    }

    static Field ratio_field(const Field& q, const Field& p) {
        Field r = Field::zeros(q.grid);
        r.meta = q.meta;
        r.meta.operator_name = "ratio[" + q.meta.operator_name + " / " + p.meta.operator_name + "]";
        for (std::size_t k = 0; k < r.values.size(); ++k) {
            const bool ok = q.converged[k] && p.converged[k] && p.values[k] != 0.0;
            r.values[k] = ok ? q.values[k] / p.values[k] : NAN;
            r.converged[k] = ok ? 1 : 0;
        }
        return r;
    }

    static std::string figure_stem(int id) {
        std::ostringstream s;
        s << "figure_" << std::setw(2) << std::setfill('0') << id;
        return s.str();
    }

    std::string in_out_dir(const std::string& file) const { return (std::filesystem::path(out_dir_) / file).string(); }

    // ----- subcommands -----

    int cmd_kernel() {
        const KernelId id = kernel_name_ == "q" ? KernelId::q() : KernelId::poisson();
        write_profiles(out_path_, id, kernel_radii_);
        emit({{"kernel", id.name()}, {"file", out_path_}, {"samples", kernel_samples_}});
        return kSuccess;
    }

    void write_profiles(const std::string& path, const KernelId& id, const std::vector<double>& radii) {
        std::vector<double> thetas(static_cast<std::size_t>(kernel_samples_));
        for (int k = 0; k < kernel_samples_; ++k) {
            thetas[k] = -kPi + kTwoPi * k / (kernel_samples_ - 1);
        }
        std::vector<std::vector<double>> cols;
        for (double r : radii) {
            if (!(r >= 0.0 && r <= 0.99)) {
                throw DomainError("kernel radius " + format_double(r) + " outside [0, 0.99]");
            }
            std::vector<double> col;
            for (double t : thetas) {
                col.push_back(real_kernel(id, r, t));
            }
            cols.push_back(std::move(col));
        }
        const std::filesystem::path p(path);
        if (p.has_parent_path()) {
            std::filesystem::create_directories(p.parent_path());
        }
        write_text(path, profiles_csv(thetas, radii, cols));
    }

    int cmd_figure() {
        const auto fc = figure_case(figure_id_);
        const auto grid = grid_.grid();
        const auto q = grid_.quadrature();
        const std::string stem = figure_stem(figure_id_);
        nlohmann::json report{{"figure", figure_id_}, {"description", fc.description}};
        auto prefactor_of = [&](double catalog) { return prefactor_text_ ? parse_prefactor(*prefactor_text_) : catalog; };

        if (const auto* kp = std::get_if<KernelPlot>(&fc.payload)) {
            const auto path = in_out_dir(stem + ".csv");
            write_profiles(path, kp->kernel, kp->radii);
            report["files"] = {path};
        } else if (const auto* pc = std::get_if<PoissonCase>(&fc.payload)) {
            const auto path = in_out_dir(stem + ".csv");
            const auto f = poisson_integral(pc->boundary, grid, q);
            write_field(path, f);
            report["files"] = {path};
            report["field"] = summary(f);
        } else {
            const QCase qc = std::holds_alternative<QCase>(fc.payload) ? std::get<QCase>(fc.payload)
                                                                         : std::get<PairedCase>(fc.payload).q;
            const auto fq = q_transform(qc.source, grid, prefactor_of(qc.prefactor), q);
            std::optional<PoissonCase> partner;
            if (const auto* pair = std::get_if<PairedCase>(&fc.payload)) {
                partner = pair->poisson;
            } else if (fc.compare_with) {
                partner = std::get<PoissonCase>(figure_case(*fc.compare_with).payload);
            }
            if (!partner) {
                const auto path = in_out_dir(stem + ".csv");
                write_field(path, fq);
                report["files"] = {path};
                report["field"] = summary(fq);
            } else {
                const auto fp = poisson_integral(partner->boundary, grid, q);
                const auto fr = ratio_field(fq, fp);
                const auto pq = in_out_dir(stem + "_q.csv");
                const auto pp = in_out_dir(stem + "_poisson.csv");
                const auto pr = in_out_dir(stem + "_ratio.csv");
                write_field(pq, fq);
                write_field(pp, fp);
                write_field(pr, fr);
                report["files"] = {pq, pp, pr};
                report["q"] = summary(fq);
                report["poisson"] = summary(fp);
            }
        }
        emit(report);
        return kSuccess;
    }

    int cmd_transform() {
        const auto source = parse_source(read_source_text());
        const auto grid = grid_.grid();
        const auto q = grid_.quadrature();
        Field f;
        if (operator_ == "project") {
            if (prefactor_text_) {
                throw UsageError("--prefactor applies to --operator q only");
            }
            f = bergman_project(source, grid, q);
        } else {
            f = q_transform(source, grid, parse_prefactor(prefactor_text_.value_or("1")), q);
        }
        write_field(out_path_, f);
        emit({{"file", out_path_}, {"operator", f.meta.operator_name}, {"field", summary(f)}});
        return kSuccess;
    }

    int cmd_poisson() {
        const auto boundary = parse_boundary(read_source_text());
        const auto f = poisson_integral(boundary, grid_.grid(), grid_.quadrature());
        write_field(out_path_, f);
        emit({{"file", out_path_}, {"operator", f.meta.operator_name}, {"field", summary(f)}});
        return kSuccess;
    }

    int cmd_project() {
        const auto source = parse_source(read_source_text());
        const auto f = bergman_project(source, grid_.grid(), grid_.quadrature());
        write_field(out_path_, f);
        emit({{"file", out_path_}, {"operator", f.meta.operator_name}, {"field", summary(f)}});
        return kSuccess;
    }

    int cmd_norms() {
        const auto doc = parse_source_config(read_source_text());
        NormSpec spec;
        if (norm_kind_ == "bergman") {
            spec = NormSpec::bergman_weighted(norm_p_, norm_alpha_, norm_truncation_);
        } else if (norm_kind_ == "harmonic") {
            spec = NormSpec::harmonic_bergman(norm_truncation_);
        } else if (norm_kind_ == "hardy") {
            spec = NormSpec::hardy_sup();
        } else {
            spec = NormSpec::circle_l2();
        }
        QuadratureSpec q;
        q.adaptive_tol = grid_.tol;
        const NormResult r = std::visit([&](const auto& f) { return norm(f, spec, q); }, doc);
        nlohmann::json j{{"kind", spec.name()},
                         {"value", r.value},
                         {"tail_estimate", r.tail_estimate},
                         {"converged", r.converged}};
        if (spec.kind == NormSpec::Kind::BergmanWeighted) {
            j["p"] = spec.p;
            j["alpha"] = spec.alpha;
        }
        if (spec.kind == NormSpec::Kind::BergmanWeighted || spec.kind == NormSpec::Kind::HarmonicBergmanL2) {
            j["truncation_radius"] = spec.truncation_radius;
        }
        if (!json_out_.empty()) {
            write_text(json_out_, j.dump(2) + "\n");
        }
        emit(j);
        return r.converged ? kSuccess : kNumericalFailure;
    }

    int cmd_verify() {
        SuiteConfig config;
        config.r_max = verify_r_max_;
        config.quadrature.adaptive_tol = grid_.tol;
        const auto report = run_invariant_suite(config);
        const auto j = to_json(report);
        if (!json_out_.empty()) {
            write_text(json_out_, j.dump(2) + "\n");
        }
        for (const auto& r : report.records) {
            out_ << (r.passed ? "PASS " : "FAIL ") << r.id << " measured=" << format_double(r.measured)
                 << " threshold=" << format_double(r.threshold) << "\n";
        }
        out_ << (report.all_passed() ? "all invariants hold\n" : "invariant failures detected\n");
        return report.all_passed() ? kSuccess : kVerificationFailure;
    }

    int cmd_conjecture() {
        SourceFunction source;
        std::string label;
        if (!source_file_.empty()) {
            source = parse_source(read_source_text());
            label = source_file_;
        } else if (figure_id_ > 0) {
            bool found = false;
            for (const auto& [id, qc] : catalog_q_cases()) {
                if (id == figure_id_) {
                    source = qc.source;
                    found = true;
                }
            }
            if (!found) {
                throw UsageError("--figure " + std::to_string(figure_id_) + " has no disk source");
            }
            label = "figure " + std::to_string(figure_id_);
        } else {
            throw UsageError("conjecture needs --source-file or --figure");
        }
        std::vector<HeatBoundary> boundaries;
        if (boundary_ != "robin") {
            boundaries.push_back(HeatBoundary::dirichlet_zero());
        }
        if (boundary_ != "dirichlet") {
            boundaries.push_back(HeatBoundary::robin(robin_h_));
        }
        ConjectureConfig config;
        config.mesh = mesh_;
        config.conductivity = conductivity_;
        config.quadrature.adaptive_tol = grid_.tol;
        nlohmann::json reports = nlohmann::json::array();
        nlohmann::json files = nlohmann::json::array();
        std::filesystem::create_directories(out_dir_);
        bool q_written = false;
        for (const auto& b : boundaries) {
            const auto res = conjecture_compare(source, b, config);
            const std::string tag = b.kind == HeatBoundary::Kind::Robin ? "robin" : "dirichlet";
            const auto heat_path = in_out_dir("conjecture_heat_" + tag + ".csv");
            write_field(heat_path, res.heat);
            files.push_back(heat_path);
            if (!q_written) {
                const auto q_path = in_out_dir("conjecture_q.csv");
                write_field(q_path, res.q_field);
                files.push_back(q_path);
                q_written = true;
            }
            reports.push_back(to_json(res.report));
        }
        const nlohmann::json doc{{"source", label},
                                 {"source_description", describe(source)},
                                 {"annulus", {config.annulus.r_min, config.annulus.r_max}},
                                 {"mesh", {{"n_r", mesh_.n_r}, {"n_theta", mesh_.n_theta}}},
                                 {"conductivity", conductivity_},
                                 {"reports", reports}};
        const auto report_path = in_out_dir("conjecture_report.json");
        write_text(report_path, doc.dump(2) + "\n");
        files.push_back(report_path);
        emit({{"files", files}, {"reports", reports}});
        return kSuccess;
    }

    std::ostream& out_;
    std::ostream& err_;
    std::vector<CLI::App*> app_subs_;

    GridOptions grid_;
    OutputOptions output_;
    std::string kernel_name_ = "poisson";
    std::vector<double> kernel_radii_;
    int kernel_samples_ = 721;
    int figure_id_ = 0;
    std::string out_dir_ = ".";
    std::string out_path_ = "field.csv";
    std::string json_out_;
    std::optional<std::string> prefactor_text_;
    std::string source_file_;
    std::string operator_ = "q";
    std::string norm_kind_ = "harmonic";
    double norm_p_ = 2.0;
    double norm_alpha_ = 0.0;
    double norm_truncation_ = 0.999;
    double verify_r_max_ = 0.9;
    std::string boundary_ = "both";
    double robin_h_ = 1.0;
    double conductivity_ = 1.0;
    PolarMesh mesh_{48, 96};
};

/// Entry point shared by the executable and the in-process tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Workbench w(out, err);
    return w.run(argc, argv);
}

} // namespace diskharm::cli
