#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sm/bases.hpp"
#include "sm/bernoulli1d.hpp"
#include "sm/euler_maclaurin.hpp"
#include "sm/fourier_simplex.hpp"
#include "sm/lattice.hpp"
#include "sm/mu.hpp"
#include "sm/mv_bernoulli.hpp"
#include "sm/parallel.hpp"
#include "sm/quadrature.hpp"
#include "sm/scalar_field.hpp"

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_csv_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<long long> parse_csv_ints(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

sm::SolidAngleMethod parse_method(const std::string& s) {
    if (s.empty() || s == "exact") return sm::SolidAngleMethod::exact();
    if (s.rfind("mc:", 0) == 0) {
        auto rest = s.substr(3);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--method", "expected mc:SAMPLES:SEED");
        return sm::SolidAngleMethod::monte_carlo(std::stoll(rest.substr(0, colon)),
                                                 std::stoull(rest.substr(colon + 1)));
    }
    throw CLI::ValidationError("--method", "expected 'exact' or 'mc:SAMPLES:SEED'");
}

sm::IntegerSimplex load_simplex(const std::string& path) {
    sm::SimplicialComplex P = sm::load_complex(path);
    if (P.simplices.size() != 1)
        throw CLI::ValidationError("--simplex", "file must contain exactly one simplex");
    return P.simplices[0];
}

json config_echo(const std::string& subcommand, const json& flags) {
    json j;
    j["subcommand"] = subcommand;
    j["flags"] = flags;
    j["threads"] = sm::effective_threads();
    return j;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solid-angle lattice sums, Bernoulli expansions and extrapolated quadrature"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: hardware)");

    // bernoulli
    auto* c_bern = app.add_subcommand("bernoulli", "periodized Bernoulli polynomial value");
    int bern_n = 0;
    double bern_x = 0.0;
    c_bern->add_option("--n", bern_n, "degree")->required();
    c_bern->add_option("--x", bern_x, "argument")->required();

    // bases
    auto* c_bases = app.add_subcommand("bases", "basis family listing as JSON");
    int bases_d = 0;
    c_bases->add_option("--d", bases_d, "dimension")->required()->check(CLI::Range(1, 6));

    // solid-angle
    auto* c_sa = app.add_subcommand("solid-angle", "normalized solid angle at a point");
    std::string sa_file, sa_point, sa_method;
    c_sa->add_option("--complex", sa_file, "complex JSON file")->required();
    c_sa->add_option("--point", sa_point, "comma-separated coordinates")->required();
    c_sa->add_option("--method", sa_method, "exact | mc:SAMPLES:SEED");

    // count
    auto* c_count = app.add_subcommand("count", "solid-angle weighted lattice point count");
    std::string count_file, count_method;
    long long count_tau = 1;
    c_count->add_option("--complex", count_file)->required();
    c_count->add_option("--tau", count_tau, "integer dilation")->required();
    c_count->add_option("--method", count_method, "exact | mc:SAMPLES:SEED");

    // mvb
    auto* c_mvb = app.add_subcommand("mvb", "multivariate periodized Bernoulli value");
    std::string mvb_j, mvb_l, mvb_x, mvb_backend = "periodization";
    double mvb_eps = 1e-3;
    long long mvb_cutoff = 0;
    c_mvb->add_option("--J", mvb_j, "multi-index (csv)")->required();
    c_mvb->add_option("--L", mvb_l, "row-major integer matrix (csv)")->required();
    c_mvb->add_option("--x", mvb_x, "point (csv)")->required();
    c_mvb->add_option("--backend", mvb_backend)
        ->check(CLI::IsMember({"periodization", "hnf", "fourier"}));
    c_mvb->add_option("--eps", mvb_eps, "mollifier width (fourier backend)");
    c_mvb->add_option("--cutoff", mvb_cutoff, "frequency cutoff (fourier backend)");

    // ft-expand
    auto* c_ft = app.add_subcommand("ft-expand", "Fourier-transform expansion vs direct quadrature");
    std::string ft_simplex, ft_f, ft_xi;
    double ft_tau = 1.0;
    int ft_w = 1;
    c_ft->add_option("--simplex", ft_simplex, "simplex JSON file")->required();
    c_ft->add_option("--f", ft_f, "integrand expression")->required();
    c_ft->add_option("--tau", ft_tau)->required();
    c_ft->add_option("--xi", ft_xi, "frequency (csv)")->required();
    c_ft->add_option("--w", ft_w, "expansion order")->required();

    // expand
    auto* c_exp = app.add_subcommand("expand", "main Bernoulli expansion report");
    std::string exp_simplex, exp_f, exp_x;
    double exp_tau = 1.0;
    int exp_w = 1;
    c_exp->add_option("--simplex", exp_simplex)->required();
    c_exp->add_option("--f", exp_f, "integrand expression")->required();
    c_exp->add_option("--tau", exp_tau)->required();
    c_exp->add_option("--x", exp_x, "evaluation point (csv)")->required();
    c_exp->add_option("--w", exp_w)->required();

    // gamma
    auto* c_gamma = app.add_subcommand("gamma", "quadrature asymptotics coefficients gamma_k");
    std::string gamma_file, gamma_f, gamma_out;
    int gamma_w = 2;
    c_gamma->add_option("--complex", gamma_file)->required();
    c_gamma->add_option("--f", gamma_f)->required();
    c_gamma->add_option("--w", gamma_w)->required();
    c_gamma->add_option("--out", gamma_out, "output CSV path (default: stdout)");

    // quad
    auto* c_quad = app.add_subcommand("quad", "extrapolated integral");
    std::string quad_file, quad_f, quad_method;
    long long quad_n = 8;
    int quad_w = 2;
    c_quad->add_option("--complex", quad_file)->required();
    c_quad->add_option("--f", quad_f)->required();
    c_quad->add_option("--N", quad_n)->required();
    c_quad->add_option("--w", quad_w)->required();
    c_quad->add_option("--method", quad_method, "exact | mc:SAMPLES:SEED");

    // table
    auto* c_table = app.add_subcommand("table", "convergence table CSV");
    std::string table_file, table_f, table_ns, table_out, table_method;
    int table_w = 2;
    c_table->add_option("--complex", table_file)->required();
    c_table->add_option("--f", table_f)->required();
    c_table->add_option("--Ns", table_ns, "comma-separated N values")->required();
    c_table->add_option("--w", table_w)->required();
    c_table->add_option("--out", table_out, "output CSV path (default: stdout)");
    c_table->add_option("--method", table_method, "exact | mc:SAMPLES:SEED");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        sm::set_threads(threads);

        if (*c_bern) {
            std::cout << fmt17(sm::bernoulli_periodized(bern_n, bern_x)) << "\n";
            return 0;
        }
        if (*c_bases) {
            sm::BasisFamily family(bases_d);
            json j;
            j["config"] = config_echo("bases", {{"d", bases_d}});
            j["d"] = bases_d;
            j["bases"] = json::array();
            for (int b = 0; b < family.basis_count(); ++b) j["bases"].push_back(family.basis(b));
            j["lambda"] = json::array();
            for (const auto& V : family.all_v()) {
                json entry;
                entry["V"] = V;
                entry["basis_index"] = family.basis_index(V);
                entry["lambda"] = family.lambda(V);
                j["lambda"].push_back(std::move(entry));
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*c_sa) {
            auto P = sm::load_complex(sa_file);
            auto x = parse_csv_doubles(sa_point);
            if (static_cast<int>(x.size()) != P.d) throw std::invalid_argument("--point: dimension mismatch");
            std::cout << fmt17(sm::solid_angle(P, x, parse_method(sa_method))) << "\n";
            return 0;
        }
        if (*c_count) {
            auto P = sm::load_complex(count_file);
            std::cout << fmt17(sm::weighted_lattice_count(P, count_tau, parse_method(count_method)))
                      << "\n";
            return 0;
        }
        if (*c_mvb) {
            auto jv = parse_csv_ints(mvb_j);
            auto lv = parse_csv_ints(mvb_l);
            auto xv = parse_csv_doubles(mvb_x);
            int d = static_cast<int>(jv.size());
            if (static_cast<int>(lv.size()) != d * d) throw std::invalid_argument("--L: need d*d entries");
            if (static_cast<int>(xv.size()) != d) throw std::invalid_argument("--x: dimension mismatch");
            sm::MIdx J(jv.begin(), jv.end());
            sm::IMat L(d, sm::IVec(d));
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) L[i][k] = lv[i * d + k];
            sm::MvBernoulli mvb(J, L);
            double v = 0.0;
            if (mvb_backend == "periodization") v = mvb.eval_periodization(xv);
            else if (mvb_backend == "hnf") v = mvb.eval_hnf(xv);
            else v = mvb.eval_fourier(xv, mvb_eps, mvb_cutoff);
            std::cout << fmt17(v) << "\n";
            return 0;
        }
        if (*c_ft) {
            auto simplex = load_simplex(ft_simplex);
            auto xi = parse_csv_doubles(ft_xi);
            sm::ScalarField f = sm::ScalarField::parse(ft_f, simplex.d, ft_w + 1 + simplex.d);
            sm::BasisFamily family(simplex.d);
            // classify M^t xi to pick the cone
            sm::RatVec pulled(simplex.d, sm::Rat(0));
            for (int i = 0; i < simplex.d; ++i)
                for (int k = 0; k < simplex.d; ++k)
                    pulled[i] += sm::rat_of(simplex.M[k][i]) * sm::rat_from_double(xi[k]);
            sm::Theta theta = sm::classify_frequency(family, pulled);
            auto fx = sm::expand_general(simplex, f, ft_tau, family, theta, ft_w,
                                         sm::default_mu_tol(simplex.d));
            auto approx = fx.evaluate(xi);
            auto exact = sm::oracle_ft(simplex, f, ft_tau, xi, 1e-10);
            json j;
            j["config"] = config_echo("ft-expand", {{"simplex", ft_simplex},
                                                    {"f", ft_f},
                                                    {"tau", ft_tau},
                                                    {"xi", xi},
                                                    {"w", ft_w}});
            j["expansion"] = {{"re", approx.real()}, {"im", approx.imag()}};
            j["oracle"] = {{"re", exact.real()}, {"im", exact.imag()}};
            j["abs_error"] = std::abs(approx - exact);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*c_exp) {
            auto simplex = load_simplex(exp_simplex);
            auto x = parse_csv_doubles(exp_x);
            sm::ScalarField f = sm::ScalarField::parse(exp_f, simplex.d, exp_w + 1 + 2 * simplex.d);
            auto rep = sm::expand_main(simplex, f, exp_tau, x, exp_w);
            json j;
            j["config"] = config_echo("expand", {{"simplex", exp_simplex},
                                                 {"f", exp_f},
                                                 {"tau", exp_tau},
                                                 {"x", x},
                                                 {"w", exp_w}});
            j["total"] = rep.total;
            j["lhs_bruteforce"] = rep.lhs_bruteforce;
            j["residual"] = rep.residual;
            j["terms"] = json::array();
            for (const auto& t : rep.main_terms) {
                json e;
                e["V"] = t.V;
                e["I"] = t.I;
                e["J"] = t.J;
                e["tau_power"] = t.tau_power;
                e["mu"] = t.mu_coeff;
                e["bernoulli"] = t.bernoulli_factor;
                e["contribution"] = t.contribution;
                j["terms"].push_back(std::move(e));
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*c_gamma) {
            auto P = sm::load_complex(gamma_file);
            sm::ScalarField f = sm::ScalarField::parse(gamma_f, P.d, gamma_w + 1 + 2 * P.d);
            auto gamma = sm::gamma_coefficients(P, f, gamma_w);
            std::string csv = "k,gamma_k\n";
            for (size_t k = 0; k < gamma.size(); ++k)
                csv += std::to_string(k + 1) + "," + fmt17(gamma[k]) + "\n";
            write_output(gamma_out, csv);
            return 0;
        }
        if (*c_quad) {
            auto P = sm::load_complex(quad_file);
            sm::ScalarField f = sm::ScalarField::parse(quad_f, P.d, quad_w + 3);
            std::cout << fmt17(sm::extrapolated_integral(P, f, quad_n, quad_w,
                                                         parse_method(quad_method)))
                      << "\n";
            return 0;
        }
        if (*c_table) {
            auto P = sm::load_complex(table_file);
            sm::ScalarField f = sm::ScalarField::parse(table_f, P.d, table_w + 5);
            auto rows = sm::convergence_table(P, f, parse_csv_ints(table_ns), table_w, std::nullopt,
                                              parse_method(table_method));
            std::string csv = "N,S_N,extrapolated,abs_error,local_order\n";
            for (const auto& r : rows) {
                csv += std::to_string(r.N) + "," + fmt17(r.s_n) + "," + fmt17(r.extrapolated) + "," +
                       fmt17(r.abs_error) + "," + fmt17(r.local_order) + "\n";
            }
            write_output(table_out, csv);
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sm::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
