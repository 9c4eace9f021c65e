#include "evid/cli.hpp"

#include <evid/chart.hpp>
#include <evid/dual.hpp>
#include <evid/ei_solver.hpp>
#include <evid/io.hpp>
#include <evid/sampling.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

namespace evid::cli {

namespace {

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Outcome of one pipeline stage: its JSON section and whether it passed.
struct Stage {
    json report;
    bool pass = true;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

class Job {
public:
    Job(const JobConfig& c, std::ostream& summary) : cfg_(c), summary_(summary)
    {
        if (cfg_.backend != "poly" && cfg_.backend != "rational" && cfg_.backend != "jet")
            throw Usage("unknown backend \"" + cfg_.backend + "\"");
        if (cfg_.mode != "exact" && cfg_.mode != "numeric") throw Usage("unknown mode \"" + cfg_.mode + "\"");
        if (!cfg_.shape.empty()) requested_shape_ = BlockShape::parse(cfg_.shape);
    }

    int execute(json& report)
    {
        const std::string& cmd = cfg_.command;
        report["command"] = cmd;
        Stage s;
        if (cmd == "solve") s = solve_stage();
        else if (cmd == "verify") s = verify_stage();
        else if (cmd == "frame") s = frame_stage();
        else if (cmd == "chart") s = chart_stage();
        else if (cmd == "torsion") s = torsion_stage();
        else if (cmd == "all") s = all_stage();
        else throw Usage("unknown command \"" + cmd + "\"");
        report.update(s.report);
        report["pass"] = s.pass;
        return s.pass ? ok : failure;
    }

private:
    void check_shape(const BlockShape& shape) const
    {
        if (requested_shape_ && !(*requested_shape_ == shape))
            throw Error(Errc::ShapeMismatch, "--shape " + requested_shape_->to_string() + " differs from input shape " +
                                                 shape.to_string());
    }

    /// Reads the seed (and solves it) or the field file, once.
    void load()
    {
        if (loaded_) return;
        if (!cfg_.seed_file.empty()) {
            const EISeed seed = seed_from_json(read_json_file(cfg_.seed_file));
            check_shape(seed.shape);
            solved_ = solve(seed);
            field_ = lift(solved_->e, Backend::rational(seed.shape.dimension()));
        } else if (!cfg_.field_file.empty()) {
            const json j = read_json_file(cfg_.field_file);
            const BlockShape shape = shape_from_json(j.at("shape"));
            check_shape(shape);
            field_ = field_from_json(j, Backend::rational(shape.dimension()));
            std::vector<ScalarFn> comps;
            for (const auto& c : field_->components())
                if (c.as_rational().is_polynomial()) comps.push_back(ScalarFn(c.as_rational().numerator()));
            if (comps.size() == shape.dimension())
                solved_ = SolvedEI{EISeed::zero(shape), VectorField(shape, std::move(comps)), {}};
        } else {
            throw Usage(cfg_.command + " needs --seed or --field");
        }
        loaded_ = true;
    }

    const SolvedEI& solved()
    {
        load();
        if (!solved_) throw Error(Errc::InvalidInput, "constructing a_3, ... needs a polynomial field");
        return *solved_;
    }

    /// The field under study on the exact rational backend.
    const VectorField& field()
    {
        load();
        return *field_;
    }

    std::vector<std::vector<double>> points(const BlockShape& shape, std::function<bool(const std::vector<double>&)> ok = {})
    {
        SamplingOptions opts;
        opts.count = cfg_.points;
        opts.seed = cfg_.rng;
        opts.order = cfg_.order;
        return sample_points(shape, opts, ok);
    }

    /// Exact residual on the selected exact backend, or sampled on jets.
    Residual evaluate(const BlockShape& shape, const std::function<Residual(const Backend&)>& fn,
                      std::function<bool(const std::vector<double>&)> admissible = {})
    {
        const std::size_t n = shape.dimension();
        if (cfg_.backend == "jet") return sample_residual(fn, points(shape, admissible), cfg_.order);
        return fn(cfg_.backend == "poly" ? Backend::poly(n) : Backend::rational(n));
    }

    Stage residual_stage(const std::vector<Residual>& rs)
    {
        Stage s;
        s.report["residuals"] = json::array();
        for (const auto& r : rs) {
            json j = residual_report(r, cfg_.rng, cfg_.tol);
            s.pass = s.pass && j["pass"].get<bool>();
            summary_ << "  " << r.identity << " [" << r.backend << "]: " << r.entries.size() << " entries, max "
                     << j["max_abs"].dump() << (j["pass"].get<bool>() ? ", pass" : ", FAIL");
            if (!j["pass"].get<bool>() && j["worst_entry"].is_object())
                summary_ << " (worst " << j["worst_entry"]["group"].get<std::string>() << " "
                         << j["worst_entry"]["indices"].dump() << ")";
            summary_ << '\n';
            s.report["residuals"].push_back(std::move(j));
        }
        return s;
    }

    Stage solve_stage()
    {
        if (cfg_.seed_file.empty()) throw Usage("solve needs --seed");
        const SolvedEI& e = solved();
        summary_ << "solve: shape " << e.e.shape().to_string() << ", " << e.e.shape().dimension() << " components\n";
        Stage s;
        s.report = field_to_json(e.e);
        s.report["seed"] = seed_to_json(e.seed);
        return s;
    }

    Stage verify_stage()
    {
        const VectorField e = field();
        summary_ << "verify: shape " << e.shape().to_string() << '\n';
        Residual atlas = evaluate(e.shape(), [&](const Backend& b) { return atlas_residual(lift(e, b)); });
        Residual ei = evaluate(e.shape(), [&](const Backend& b) { return ei_residual(lift(e, b)); });
        Stage s = residual_stage({atlas, ei});
        s.report["shape"] = e.shape().sizes();
        return s;
    }

    Stage torsion_stage()
    {
        const VectorField e = field();
        summary_ << "torsion: shape " << e.shape().to_string() << '\n';
        Residual t = evaluate(e.shape(), [&](const Backend& b) { return nijenhuis_torsion(mult_operator(lift(e, b))); });
        Stage s = residual_stage({t});
        s.report["shape"] = e.shape().sizes();
        return s;
    }

    std::vector<double> base_point(const BlockShape& shape) const
    {
        if (cfg_.p0.empty()) return std::vector<double>(shape.dimension(), 1.0);
        if (cfg_.p0.size() != shape.dimension()) throw Error(Errc::ShapeMismatch, "--p0 has the wrong dimension");
        return cfg_.p0;
    }

    /// Generator components on the rational backend (exact mode) or jets at p0.
    GeneratorComponents generator(const BlockShape& shape)
    {
        if (cfg_.a.size() != shape.blocks()) throw Usage("--a must be given once per block");
        const std::size_t n = shape.dimension();
        const Backend rb = Backend::rational(n);
        GeneratorComponents given;
        bool complete = true;
        for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha) {
            given.emplace_back();
            if (shape.size(alpha) == 1) continue;
            for (const auto& src : split(cfg_.a[alpha - 1], ','))
                given.back().push_back(parse_block_local(src, shape, alpha, rb));
            if (given.back().empty()) throw Usage("--a for block " + std::to_string(alpha) + " is empty");
            if (given.back().size() > shape.size(alpha) - 1)
                throw Error(Errc::ShapeMismatch, "too many generator components for block " + std::to_string(alpha));
            complete = complete && given.back().size() == shape.size(alpha) - 1;
        }
        if (complete && cfg_.mode == "exact") return given;

        std::vector<ScalarFn> a2;
        for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha)
            a2.push_back(shape.size(alpha) == 1 ? rb.one() : given[alpha - 1][0]);
        if (cfg_.mode == "exact") {
            GeneratorComponents a = construct_a(solved(), a2);
            GeneratorComponents out;
            for (const auto& block : a) {
                out.emplace_back();
                for (const auto& c : block) out.back().push_back(rb.lift(c));
            }
            return out;
        }
        NumericConstruction nc;
        nc.point = base_point(shape);
        nc.order = cfg_.order;
        nc.tol = cfg_.tol;
        return construct_a(solved(), a2, ConstructionMode::Numeric, nc);
    }

    Stage frame_stage()
    {
        const VectorField e = field();
        const BlockShape& shape = e.shape();
        const GeneratorComponents a = generator(shape);
        summary_ << "frame: shape " << shape.to_string() << ", " << cfg_.mode << " generator\n";
        if (cfg_.mode == "numeric") {
            const Backend jb = Backend::jet(base_point(shape), cfg_.order);
            const DualFrame f = build_frame(lift(e, jb), a);
            Stage s = residual_stage({v2_conditions(f), frame_product_check(f), commutator_check(f)});
            s.report["point"] = jb.float_point();
            json vals = json::array();
            for (const auto& block : a) {
                json b = json::array();
                for (const auto& c : block) b.push_back(c.jet_value());
                vals.push_back(b);
            }
            s.report["a_values"] = vals;
            return s;
        }
        frame_ = build_frame(e, a);
        auto checks = [&](const Backend& b) {
            GeneratorComponents ab;
            for (const auto& block : a) {
                ab.emplace_back();
                for (const auto& c : block) ab.back().push_back(b.lift(c));
            }
            const DualFrame f = b.kind() == BackendKind::Jet ? build_frame(lift(e, b), ab) : *frame_;
            Residual all = v2_conditions(f);
            all.identity = "frame";
            all.append(frame_product_check(f));
            all.append(recursion_check(f));
            all.append(commutator_check(f));
            return all;
        };
        std::vector<Residual> rs;
        if (cfg_.backend == "jet") {
            rs.push_back(sample_residual(checks, points(shape, [&](const std::vector<double>& p) {
                                             for (std::size_t alpha = 1; alpha <= shape.blocks(); ++alpha)
                                                 if (shape.size(alpha) >= 2 &&
                                                     std::abs(a[alpha - 1][0].evaluate(std::span<const double>(p))) < 0.1)
                                                     return false;
                                             return true;
                                         }),
                                         cfg_.order));
        } else {
            const DualFrame& f = *frame_;
            rs = {v2_conditions(f), frame_product_check(f), recursion_check(f), commutator_check(f)};
        }
        Stage s = residual_stage(rs);
        s.report["frame"] = frame_to_json(*frame_);
        return s;
    }

    std::vector<std::vector<double>> grid(std::size_t n) const
    {
        if (cfg_.grid == 0) throw Usage("--grid must be positive");
        std::vector<double> axis;
        if (cfg_.grid == 1) axis = {0.0};
        else
            for (std::size_t k = 0; k < cfg_.grid; ++k)
                axis.push_back(-cfg_.radius + 2 * cfg_.radius * double(k) / double(cfg_.grid - 1));
        std::vector<std::vector<double>> out{{}};
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::vector<double>> next;
            for (const auto& w : out)
                for (double x : axis) {
                    next.push_back(w);
                    next.back().push_back(x);
                }
            out = std::move(next);
        }
        return out;
    }

    Stage chart_stage()
    {
        if (cfg_.mode == "numeric") throw Usage("chart needs an exact frame (--mode exact)");
        if (!frame_) {
            const VectorField e = field();
            frame_ = build_frame(e, generator(e.shape()));
        }
        const BlockShape& shape = frame_->shape;
        ChartSpec spec;
        spec.p0 = base_point(shape);
        spec.grid = grid(shape.dimension());
        spec.h = cfg_.h;
        spec.tol = cfg_.chart_tol;
        spec.radius = cfg_.radius;
        ChartResult r = integrate_chart(*frame_, spec);
        Residual push = pushforward_check(*frame_, r);
        Stage s;
        s.report = chart_report(r);
        s.pass = r.max_push_err() <= cfg_.push_tol;
        s.report["pushforward"] = residual_report(push, cfg_.rng, cfg_.push_tol);
        s.report["pass"] = s.pass;
        summary_ << "chart: " << r.samples.size() << " samples, order " << r.max_order_err() << ", jacobian "
                 << r.max_jac_err() << ", pushforward " << r.max_push_err() << (s.pass ? ", pass" : ", FAIL") << '\n';
        return s;
    }

    Stage all_stage()
    {
        if (cfg_.seed_file.empty()) throw Usage("all needs --seed");
        Stage s;
        s.report["solve"] = solve_stage().report;
        for (auto [name, fn] : {std::pair{"verify", &Job::verify_stage}, std::pair{"frame", &Job::frame_stage},
                                std::pair{"chart", &Job::chart_stage}}) {
            Stage part = (this->*fn)();
            part.report["pass"] = part.pass;
            s.report[name] = std::move(part.report);
            s.pass = s.pass && part.pass;
            if (!s.pass) break;
        }
        return s;
    }

    JobConfig cfg_;
    std::ostream& summary_;
    bool loaded_ = false;
    std::optional<BlockShape> requested_shape_;
    std::optional<SolvedEI> solved_;
    std::optional<VectorField> field_;
    std::optional<DualFrame> frame_;
};

int exit_code_for(Errc code)
{
    switch (code) {
    case Errc::NonCommutingFrame:
    case Errc::QViolated:
    case Errc::NotInvertible:
    case Errc::ZeroGenerator:
    case Errc::NotClosed:
        return failure;
    default:
        return usage;
    }
}

}  // namespace

int run(const JobConfig& config, std::ostream& log, std::ostream& err)
{
    std::ostream& summary = config.out.empty() ? err : log;
    try {
        Job job(config, summary);
        json report;
        const int code = job.execute(report);
        const std::string text = report.dump(2) + "\n";
        if (config.out.empty()) log << text;
        else write_atomic(config.out, text);
        return code;
    } catch (const Usage& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const Error& e) {
        err << "error: " << e.what();
        if (!e.indices().empty()) {
            err << " [";
            for (std::size_t k = 0; k < e.indices().size(); ++k) err << (k ? "," : "") << e.indices()[k];
            err << "]";
        }
        if (!e.detail().empty()) err << " (" << e.detail() << ")";
        err << '\n';
        return exit_code_for(e.code());
    } catch (const json::exception& e) {
        err << "error: malformed input: " << e.what() << '\n';
        return usage;
    }
}

int main(int argc, const char* const* argv, std::ostream& log, std::ostream& err)
{
    JobConfig cfg;
    CLI::App app{"Eventual identities of regular F-manifolds: solve, verify, build dual frames and charts"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_config("--config", "", "TOML/INI file with option values; flags given on the command line win");
    app.add_option("command", cfg.command, "solve | verify | frame | chart | torsion | all")
        ->required()
        ->check(CLI::IsMember({"solve", "verify", "frame", "chart", "torsion", "all"}));
    app.add_option("--shape", cfg.shape, "Block sizes, e.g. 3,2,1");
    app.add_option("--seed", cfg.seed_file, "Seed file (JSON)");
    app.add_option("--field", cfg.field_file, "Vector field file (JSON)");
    app.add_option("--a", cfg.a, "Generator components per block in block-local names, a2[,a3,...]");
    app.add_option("--backend", cfg.backend, "poly | rational | jet")
        ->check(CLI::IsMember({"poly", "rational", "jet"}));
    app.add_option("--points", cfg.points, "Jet sample points");
    app.add_option("--rng", cfg.rng, "Sampling seed");
    app.add_option("--tol", cfg.tol, "Residual tolerance on jets");
    app.add_option("--out", cfg.out, "Report path (JSON)");
    app.add_option("--order", cfg.order, "Jet order");
    app.add_option("--mode", cfg.mode, "exact | numeric construction of a_3, ...")
        ->check(CLI::IsMember({"exact", "numeric"}));
    app.add_option("--p0", cfg.p0, "Base point")->delimiter(',');
    app.add_option("--radius", cfg.radius, "Chart radius in w");
    app.add_option("--grid", cfg.grid, "Grid points per w-axis");
    app.add_option("--h", cfg.h, "Flow step size");
    app.add_option("--chart-tol", cfg.chart_tol, "Flow-order tolerance");
    app.add_option("--push-tol", cfg.push_tol, "Pushforward tolerance");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        log << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
    return run(cfg, log, err);
}

}  // namespace evid::cli
