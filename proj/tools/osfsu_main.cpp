// osfsu: stream sparse feature columns, impute them block-wise, select online,
// and evaluate the selection under k-fold cross-validation.

#include "osfsu/dataset.hpp"
#include "osfsu/eval.hpp"
#include "osfsu/report.hpp"
#include "osfsu/selector.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace osfsu;

std::uint64_t fallback_seed() {
    if (const char* env = std::getenv("OSFSU_SEED")) {
        std::uint64_t value = 0;
        const char* last = env + std::string_view(env).size();
        auto [ptr, ec] = std::from_chars(env, last, value);
        if (ec == std::errc{} && ptr == last) return value;
    }
    return 0;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

fs::path truth_path_for(const fs::path& csv_out) {
    fs::path p = csv_out;
    if (p.extension() == ".csv") p.replace_extension();
    p += ".truth.json";
    return p;
}

struct SelectorFlags {
    Eigen::Index block_size = 15;
    int latent_dim = 5;
    double lambda = 0.01;
    double eta = 1e-5;
    int lmax = 1000;
    double tol = 1e-5;
    double init_scale = 0.1;
    double alpha_min = 0.01;
    double alpha_max = 0.1;
    std::vector<double> trapezoid{0.0, 0.5, 0.9, 1.0};
    double radius = 0.15;
    int max_cond = 3;
    bool discrete = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--block-size", block_size, "Columns buffered per block");
        cmd->add_option("--latent-dim", latent_dim, "Latent dimension d");
        cmd->add_option("--lambda", lambda, "Regularization strength");
        cmd->add_option("--eta", eta, "SGD learning rate");
        cmd->add_option("--lmax", lmax, "Max SGD epochs per block");
        cmd->add_option("--tol", tol, "Relative loss-change stop tolerance");
        cmd->add_option("--init-scale", init_scale, "Factor initialization scale");
        cmd->add_option("--alpha-min", alpha_min, "Lower edge of the significance band");
        cmd->add_option("--alpha-max", alpha_max, "Upper edge of the significance band");
        cmd->add_option("--trapezoid", trapezoid, "Trapezoid corners a b c d")->expected(4);
        cmd->add_option("--radius", radius, "Neighborhood radius for fuzzy ranking");
        cmd->add_option("--max-cond", max_cond, "Max conditioning-set size");
        cmd->add_flag("--discrete", discrete, "Use the G^2 test (discrete data)");
    }

    SelectorConfig to_config(std::uint64_t seed) const {
        SelectorConfig cfg;
        cfg.block_width = block_size;
        cfg.lfa.latent_dim = latent_dim;
        cfg.lfa.lambda = lambda;
        cfg.lfa.eta = eta;
        cfg.lfa.max_epochs = lmax;
        cfg.lfa.tol = tol;
        cfg.lfa.init_scale = init_scale;
        cfg.lfa.init_seed = seed;
        cfg.band = AlphaBand{alpha_min, alpha_max};
        cfg.trapezoid = TrapezoidParams{trapezoid[0], trapezoid[1], trapezoid[2], trapezoid[3]};
        cfg.nrs_radius = radius;
        cfg.max_conditioning = max_cond;
        cfg.seed = seed;
        cfg.discrete = discrete;
        return cfg;
    }
};

std::vector<double> parse_sweep(const std::string& text) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw std::invalid_argument("sweep must be start:stop:step");
    const double start = std::stod(text.substr(0, first));
    const double stop = std::stod(text.substr(first + 1, second - first - 1));
    const double step = std::stod(text.substr(second + 1));
    if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
    std::vector<double> values;
    for (int i = 0;; ++i) {
        // Snap to a 1e-9 grid so floating steps land on the printed theta values.
        const double t = std::round((start + i * step) * 1e9) / 1e9;
        if (t > stop + 1e-9) break;
        values.push_back(t);
    }
    if (values.empty()) throw std::invalid_argument("sweep produced no values");
    return values;
}

std::vector<double> read_value_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw std::invalid_argument(path.string() + ": non-numeric entry");
    return values;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"online sparse-streaming feature selection"};
    app.require_subcommand(1);
    app.fallthrough(); // lets the global --seed appear after the subcommand

    std::uint64_t seed = fallback_seed();
    app.add_option("--seed", seed, "Seed for all randomized steps")->capture_default_str();

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with known truth");
    Eigen::Index s_instances = 200, s_features = 50, s_relevant = 3;
    double s_noise = 0.1;
    std::string s_out;
    synth->add_option("--instances", s_instances, "Instance count");
    synth->add_option("--features", s_features, "Feature count");
    synth->add_option("--relevant", s_relevant, "Number of label-generating columns");
    synth->add_option("--noise", s_noise, "Label noise scale");
    synth->add_option("--out", s_out, "Output CSV path")->required();

    // --- mask ---
    auto* mask = app.add_subcommand("mask", "Blank feature cells at a given rate");
    std::string m_in, m_out;
    double m_rate = 0.1;
    mask->add_option("--in", m_in, "Input CSV")->required();
    mask->add_option("--rate", m_rate, "Missing rate theta in [0, 1)");
    mask->add_option("--out", m_out, "Output CSV path")->required();

    // --- select ---
    auto* select = app.add_subcommand("select", "Run the online selector over a CSV stream");
    std::string sel_in, sel_out, sel_trace;
    SelectorFlags sel_flags;
    select->add_option("--in", sel_in, "Input CSV")->required();
    select->add_option("--out", sel_out, "Selection JSON path")->required();
    select->add_option("--trace", sel_trace, "Per-column decision log (JSONL)");
    sel_flags.attach(select);

    // --- eval ---
    auto* eval = app.add_subcommand("eval", "Cross-validated KNN accuracy of the selection");
    std::string e_in, e_out, e_sweep;
    double e_rate = 0.1;
    int e_folds = 5, e_knn = 3, e_jobs = 1;
    SelectorFlags eval_flags;
    eval->add_option("--in", e_in, "Input CSV (complete)")->required();
    eval->add_option("--rate", e_rate, "Training missing rate theta");
    eval->add_option("--folds", e_folds, "Fold count");
    eval->add_option("--knn", e_knn, "KNN neighbor count");
    eval->add_option("--sweep", e_sweep, "Theta sweep start:stop:step (emits CSV)");
    eval->add_option("--jobs", e_jobs, "Parallel folds / sweep points");
    eval->add_option("--out", e_out, "Report path (JSON, or CSV for sweeps)")->required();
    eval_flags.attach(eval);

    // --- wilcoxon ---
    auto* wilcoxon = app.add_subcommand("wilcoxon", "Signed-ranks comparison of two accuracy files");
    std::string w_a, w_b, w_out;
    double w_alpha = 0.1;
    wilcoxon->add_option("--a", w_a, "First value file (one number per line)")->required();
    wilcoxon->add_option("--b", w_b, "Second value file")->required();
    wilcoxon->add_option("--alpha", w_alpha, "Significance level");
    wilcoxon->add_option("--out", w_out, "Optional JSON result path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the parse error
        return code == 0 ? 0 : 2;
    }

    if (synth->parsed()) {
        auto [dataset, truth] = generate_synthetic(s_instances, s_features, s_relevant, s_noise, seed);
        atomic_write_file(s_out, to_csv(dataset));
        atomic_write_file(truth_path_for(s_out), ground_truth_to_json(truth).dump(2) + "\n");
        std::cout << "wrote " << s_out << " and " << truth_path_for(s_out).string() << "\n";
        return 0;
    }

    if (mask->parsed()) {
        const Dataset d = load_csv_file(m_in);
        const Dataset masked = sparsify(d, MaskSpec{m_rate, seed});
        atomic_write_file(m_out, to_csv(masked));
        std::cout << "wrote " << m_out << " (" << masked.missing_count() << " missing cells)\n";
        return 0;
    }

    if (select->parsed()) {
        const Dataset d = load_csv_file(sel_in);
        const SelectorConfig cfg = sel_flags.to_config(seed);
        const std::vector<StreamColumn> stream = stream_columns(d);
        const SelectionResult result = run(stream, d.labels, cfg, !sel_trace.empty());
        atomic_write_file(sel_out, selection_to_json(result, cfg).dump(2) + "\n");
        if (!sel_trace.empty()) atomic_write_file(sel_trace, trace_to_jsonl(result));
        std::cout << "selected " << result.selected.size() << " features over "
                  << result.blocks_processed << " blocks\n";
        return 0;
    }

    if (eval->parsed()) {
        const Dataset d = load_csv_file(e_in);
        const SelectorConfig cfg = eval_flags.to_config(seed);
        if (e_sweep.empty()) {
            const EvalReport report = cross_validate(d, cfg, e_rate, e_folds, e_knn, seed, e_jobs);
            atomic_write_file(e_out, eval_report_to_json(report).dump(2) + "\n");
            std::cout << "mean accuracy " << report.mean << " over " << e_folds << " folds\n";
            return 0;
        }
        const std::vector<double> thetas = parse_sweep(e_sweep);
        std::vector<EvalReport> reports(thetas.size());
        const int jobs = std::max(1, e_jobs);
        std::size_t next = 0;
        while (next < thetas.size()) {
            std::vector<std::future<EvalReport>> batch;
            for (int j = 0; j < jobs && next < thetas.size(); ++j, ++next)
                batch.push_back(std::async(std::launch::async, [&, next] {
                    return cross_validate(d, cfg, thetas[next], e_folds, e_knn, seed, 1);
                }));
            for (std::size_t j = 0; j < batch.size(); ++j)
                reports[next - batch.size() + j] = batch[j].get();
        }
        std::string csv = "theta,fold,accuracy,n_selected\n";
        for (std::size_t t = 0; t < thetas.size(); ++t)
            for (int f = 0; f < e_folds; ++f) {
                csv += format_double(thetas[t]);
                csv += ',';
                csv += std::to_string(f);
                csv += ',';
                csv += format_double(reports[t].fold_accuracies[static_cast<std::size_t>(f)]);
                csv += ',';
                csv += std::to_string(reports[t].selected_counts[static_cast<std::size_t>(f)]);
                csv += '\n';
            }
        atomic_write_file(e_out, csv);
        std::cout << "wrote sweep over " << thetas.size() << " theta values to " << e_out << "\n";
        return 0;
    }

    if (wilcoxon->parsed()) {
        const std::vector<double> a = read_value_file(w_a);
        const std::vector<double> b = read_value_file(w_b);
        const WilcoxonResult result = wilcoxon_signed_ranks(a, b, w_alpha);
        std::cout << "R+ = " << result.r_plus << ", R- = " << result.r_minus
                  << ", R_min = " << result.r_min << ", z = " << result.z << ", n = "
                  << result.n_effective << "\n"
                  << (result.degenerate ? "degenerate (all differences zero): accept"
                      : result.reject    ? "reject the null hypothesis"
                                         : "accept the null hypothesis")
                  << "\n";
        if (!w_out.empty()) atomic_write_file(w_out, wilcoxon_to_json(result).dump(2) + "\n");
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
