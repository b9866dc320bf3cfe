#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "sosmat/errors.hpp"
#include "sosmat/json_io.hpp"
#include "sosmat/rng.hpp"
#include "sosmat/schmudgen.hpp"
#include "sosmat/sos.hpp"

namespace {

using namespace sosmat;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNotPsd = 3;
constexpr int kExitNoCertificate = 4;
constexpr int kExitInvalidCertificate = 5;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

int cmd_diagonalize(const std::string& input, const std::string& output) {
    PolyMatrix F = polymatrix_from_json(read_json_file(input));
    if (!F.is_symmetric(0.0)) {
        std::cerr << "error: field 'entries' is not symmetric\n";
        return kExitInput;
    }
    Diagonalization diag = diagonalize(F);
    auto residuals = verify_diagonalization(F, diag);
    write_json_file(output, to_json(diag, residuals));
    std::cout << "residuals: " << residuals[0] << " " << residuals[1] << " " << residuals[2]
              << "\n";
    return kExitOk;
}

int cmd_certify(const std::string& input, const std::string& domain_flag,
                const std::string& output, const CertifyOptions& opts) {
    PolyMatrix F = polymatrix_from_json(read_json_file(input));
    if (!F.is_symmetric(0.0)) {
        std::cerr << "error: field 'entries' is not symmetric\n";
        return kExitInput;
    }
    Domain domain = Domain::parse(domain_flag);
    Certificate cert = certify_matrix(F, domain, opts);
    write_json_file(output, to_json(cert));
    std::cout << "residual: " << cert.residual << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& matrix_path, const std::string& cert_path, double tol) {
    PolyMatrix F = polymatrix_from_json(read_json_file(matrix_path));
    Certificate cert = certificate_from_json(read_json_file(cert_path));
    double residual = verify_certificate(F, cert);
    std::cout << "residual: " << residual << "\n";
    if (residual > tol) {
        std::cerr << "error: certificate residual exceeds " << tol << "\n";
        return kExitInvalidCertificate;
    }
    return kExitOk;
}

int cmd_bench_diag(const std::vector<int>& m_list, const std::vector<int>& d_list, int trials,
                   std::uint64_t seed, bool with_seconds) {
    for (int m : m_list)
        if (m < 2) {
            std::cerr << "error: --m entries must be >= 2\n";
            return kExitInput;
        }
    for (int d : d_list)
        if (d < 1) {
            std::cerr << "error: --d entries must be >= 1\n";
            return kExitInput;
        }
    std::cout << "# prng=mt19937_64/53-bit seed=" << seed << " trials=" << trials << "\n";
    std::cout << "m,d,err_XpXm_bI,err_XmFXmT_D,err_XpDXpT_b2F,mean_seconds\n";
    for (int m : m_list)
        for (int d : d_list) {
            double worst[3] = {0.0, 0.0, 0.0};
            double total = 0.0;
            for (int t = 0; t < trials; ++t) {
                std::uint64_t s = mix_seed(seed, (static_cast<std::uint64_t>(m) << 40) ^
                                                     (static_cast<std::uint64_t>(d) << 20) ^
                                                     static_cast<std::uint64_t>(t));
                PolyMatrix F = random_symmetric(m, 1, d, s);
                auto t0 = std::chrono::steady_clock::now();
                Diagonalization diag = diagonalize(F);
                auto residuals = verify_diagonalization(F, diag);
                total += seconds_since(t0);
                for (int i = 0; i < 3; ++i) worst[i] = std::max(worst[i], residuals[i]);
            }
            std::cout << m << "," << d << "," << format_sci(worst[0]) << ","
                      << format_sci(worst[1]) << "," << format_sci(worst[2]) << ","
                      << format_sci(with_seconds ? total / trials : 0.0) << "\n";
        }
    return kExitOk;
}

int cmd_bench_gram(const std::vector<int>& n_list, const std::vector<int>& k_list, int trials,
                   std::uint64_t seed, int max_iters, int restarts, int rank_max,
                   bool with_seconds) {
    std::cout << "# prng=mt19937_64/53-bit seed=" << seed << " trials=" << trials
              << " planted_rank=2\n";
    std::cout << "n,k,rank,iters,backward_err,mean_seconds\n";
    for (int n : n_list)
        for (int k : k_list) {
            if (k > n * (n + 1) / 2) {
                std::cerr << "error: need k <= n(n+1)/2\n";
                return kExitInput;
            }
            LmOptions lm;
            lm.max_iters = max_iters;
            int rank = 0, iters = 0;
            double err = 0.0, total = 0.0;
            for (int t = 0; t < trials; ++t) {
                std::uint64_t s = mix_seed(seed, (static_cast<std::uint64_t>(n) << 40) ^
                                                     (static_cast<std::uint64_t>(k) << 20) ^
                                                     static_cast<std::uint64_t>(t));
                GramProblem prob = random_planted_problem(n, k, 2, s);
                auto t0 = std::chrono::steady_clock::now();
                GramSolution sol = rank_staircase(prob, lm, rank_max, restarts, mix_seed(s, 1));
                total += seconds_since(t0);
                rank = std::max(rank, sol.rank);
                if (!sol.iterations_per_rank.empty())
                    iters = std::max(iters, sol.iterations_per_rank.back());
                err = std::max(err, sol.residual);
            }
            std::cout << n << "," << k << "," << rank << "," << iters << ","
                      << format_sci(err) << "," << format_sci(with_seconds ? total / trials : 0.0)
                      << "\n";
        }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schmudgen diagonalization and sum-of-squares certificates for polynomial matrices"};
    app.require_subcommand(1);

    std::string input, output = "out.json", matrix_path, cert_path, domain_flag;
    double verify_tol = 1e-6;
    std::uint64_t seed = 1;
    int trials = 10, max_iters = 30, restarts = 1, rank_max = 4;
    bool no_seconds = false;
    std::vector<int> m_list{2, 3}, d_list{10, 50}, n_list{100}, k_list{50};
    CertifyOptions copts;

    auto* diag_cmd = app.add_subcommand("diagonalize", "diagonalize a symmetric polynomial matrix");
    diag_cmd->add_option("input", input, "PolyMatrix JSON file")->required();
    diag_cmd->add_option("--out", output, "output Diagonalization JSON");

    auto* cert_cmd = app.add_subcommand("certify", "produce a psd certificate on a domain");
    cert_cmd->add_option("input", input, "PolyMatrix JSON file")->required();
    cert_cmd->add_option("--domain", domain_flag,
                         "rn | rline | halfline | interval:a:b | strip:a:b")->required();
    cert_cmd->add_option("--out", output, "output Certificate JSON");
    cert_cmd->add_option("--seed", copts.gram.seed, "search seed");
    cert_cmd->add_option("--restarts", copts.gram.restarts, "Gram search restarts per rank");
    cert_cmd->add_option("--rank-max", copts.gram.rank_max, "largest Gram rank to try");
    cert_cmd->add_option("--reznick-max", copts.reznick_max, "largest multiplier exponent to try");
    cert_cmd->add_option("--tol", copts.gram.lm.residual_tol, "Gram residual tolerance");

    auto* verify_cmd = app.add_subcommand("verify", "verify a certificate against a matrix");
    verify_cmd->add_option("matrix", matrix_path, "PolyMatrix JSON file")->required();
    verify_cmd->add_option("certificate", cert_path, "Certificate JSON file")->required();
    verify_cmd->add_option("--tol", verify_tol, "acceptance residual");

    auto* bench_diag_cmd = app.add_subcommand("bench-diag", "random diagonalization benchmark (CSV)");
    bench_diag_cmd->add_option("--m", m_list, "matrix sizes")->delimiter(',');
    bench_diag_cmd->add_option("--d", d_list, "entry degrees")->delimiter(',');
    bench_diag_cmd->add_option("--trials", trials, "instances per configuration");
    bench_diag_cmd->add_option("--seed", seed, "base seed");
    bench_diag_cmd->add_flag("--no-seconds", no_seconds, "zero the seconds column (byte-stable output)");

    auto* bench_gram_cmd = app.add_subcommand("bench-gram", "planted low-rank Gram benchmark (CSV)");
    bench_gram_cmd->add_option("--n", n_list, "Gram sizes")->delimiter(',');
    bench_gram_cmd->add_option("--k", k_list, "constraint counts")->delimiter(',');
    bench_gram_cmd->add_option("--trials", trials, "instances per configuration");
    bench_gram_cmd->add_option("--seed", seed, "base seed");
    bench_gram_cmd->add_option("--max-iters", max_iters, "LM iteration cap per attempt");
    bench_gram_cmd->add_option("--restarts", restarts, "restarts per rank level");
    bench_gram_cmd->add_option("--rank-max", rank_max, "largest rank to try");
    bench_gram_cmd->add_flag("--no-seconds", no_seconds, "zero the seconds column (byte-stable output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (diag_cmd->parsed()) return cmd_diagonalize(input, output);
        if (cert_cmd->parsed()) return cmd_certify(input, domain_flag, output, copts);
        if (verify_cmd->parsed()) return cmd_verify(matrix_path, cert_path, verify_tol);
        if (bench_diag_cmd->parsed())
            return cmd_bench_diag(m_list, d_list, trials, seed, !no_seconds);
        if (bench_gram_cmd->parsed())
            return cmd_bench_gram(n_list, k_list, trials, seed, max_iters, restarts, rank_max,
                                  !no_seconds);
    } catch (const NotPsdError& e) {
        std::cerr << "not psd: " << e.what() << "\n  witness point: (";
        for (size_t i = 0; i < e.point.size(); ++i)
            std::cerr << e.point[i] << (i + 1 < e.point.size() ? ", " : "");
        std::cerr << ")  value/min-eigenvalue: " << e.value << "\n";
        return kExitNotPsd;
    } catch (const NoCertificateError& e) {
        std::cerr << "no certificate: " << e.what() << " (best residual " << e.best_residual
                  << ")\n";
        return kExitNoCertificate;
    } catch (const InvalidCertificateError& e) {
        std::cerr << "invalid certificate: " << e.what() << "\n";
        return kExitInvalidCertificate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
