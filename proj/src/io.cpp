#include "fracdrift/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "fracdrift/errors.hpp"

namespace fracdrift {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary);  // binary: LF line endings everywhere
    if (!out) throw ValidationError("cannot open for writing: " + file.string());
    out << content;
    if (!out) throw NumericalError("write failed: " + file.string());
}

void write_path_csv(const std::filesystem::path& file, const SampledPath& path, const SampledPath& noise) {
    std::ostringstream os;
    os << "t,X,BH\n";
    for (std::size_t i = 0; i < path.size(); ++i)
        os << format_double(path.grid.node(i)) << ',' << format_double(path.values[i]) << ','
           << format_double(noise.values[i]) << '\n';
    write_text_file(file, os.str());
}

SampledPath read_data_csv(const std::filesystem::path& file, const TimeGrid& grid) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open data file: " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(file.string() + ": empty file");
    // header row: must start with t,X
    if (line.rfind("t,X", 0) != 0)
        throw ValidationError(file.string() + ":1: expected header starting with 't,X'");

    std::vector<double> t, x;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        double vals[2];
        for (int c = 0; c < 2; ++c) {
            if (!std::getline(ss, cell, ','))
                throw ValidationError(file.string() + ":" + std::to_string(row) + ": expected at least 2 columns");
            try {
                std::size_t pos = 0;
                vals[c] = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ValidationError(file.string() + ":" + std::to_string(row) + ": non-numeric cell '" + cell + "'");
            }
        }
        t.push_back(vals[0]);
        x.push_back(vals[1]);
    }
    if (t.size() != grid.node_count())
        throw ValidationError(file.string() + ": row count " + std::to_string(t.size()) +
                              " does not match configured grid (" + std::to_string(grid.node_count()) + " nodes)");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (std::abs(t[i] - grid.node(i)) > 1e-9 * std::max(1.0, grid.horizon()))
            throw ValidationError(file.string() + ":" + std::to_string(i + 2) +
                                  ": time value does not match configured grid");
    return SampledPath(grid, std::move(x));
}

namespace {

ordered_json vec_json(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(x);
    return a;
}

ordered_json matrix_json(const std::vector<double>& m, std::size_t d) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < d; ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < d; ++j) row.push_back(m[i * d + j]);
        rows.push_back(row);
    }
    return rows;
}

ordered_json estimation_json(const EstimationResult& res) {
    ordered_json j;
    j["theta_hat"] = vec_json(res.theta_hat);
    j["loglik_at_hat"] = res.loglik_at_hat;
    if (!res.normalized_error.empty()) j["normalized_error"] = vec_json(res.normalized_error);
    j["converged"] = res.converged;
    j["n_evals"] = res.n_evals;
    j["hit_boundary"] = res.hit_boundary;
    return j;
}

ordered_json ks_json(const KsResult& ks) {
    ordered_json j;
    j["statistic"] = ks.statistic;
    j["p_value"] = ks.p_value;
    j["degenerate"] = ks.degenerate;
    return j;
}

ordered_json fisher_json(const FisherMatrix& fm) {
    ordered_json j;
    j["dim"] = fm.dim;
    j["gamma"] = matrix_json(fm.gamma, fm.dim);
    j["gamma_inv"] = matrix_json(fm.inv, fm.dim);
    j["cholesky_lower"] = matrix_json(fm.chol, fm.dim);
    j["eigenvalues"] = vec_json(fm.eigenvalues);
    return j;
}

}  // namespace

std::string estimation_to_json(const EstimationResult& res) { return estimation_json(res).dump(2) + "\n"; }

std::string fisher_to_json(const FisherMatrix& fm) { return fisher_json(fm).dump(2) + "\n"; }

void write_fisher_csv(const std::filesystem::path& dir, const FisherMatrix& fm) {
    const auto matrix_csv = [&](const std::vector<double>& m) {
        std::ostringstream os;
        for (std::size_t i = 0; i < fm.dim; ++i) {
            for (std::size_t j = 0; j < fm.dim; ++j) os << (j ? "," : "") << format_double(m[i * fm.dim + j]);
            os << '\n';
        }
        return os.str();
    };
    write_text_file(dir / "gamma.csv", matrix_csv(fm.gamma));
    write_text_file(dir / "gamma_inv.csv", matrix_csv(fm.inv));
    std::ostringstream ev;
    for (std::size_t i = 0; i < fm.eigenvalues.size(); ++i) ev << (i ? "," : "") << format_double(fm.eigenvalues[i]);
    ev << '\n';
    write_text_file(dir / "eigenvalues.csv", ev.str());
}

std::string volterra_to_json(const VolterraCheckResult& res) {
    ordered_json j;
    j["replicates"] = res.replicates;
    j["times"] = vec_json(res.times);
    j["variance"] = vec_json(res.variance);
    ordered_json rel = ordered_json::array();
    for (std::size_t q = 0; q < res.times.size(); ++q) rel.push_back(res.variance[q] / res.times[q] - 1.0);
    j["relative_error"] = rel;
    return j.dump(2) + "\n";
}

std::string study_report_to_json(const StudyReport& report) {
    ordered_json j;
    j["master_seed"] = report.master_seed;
    j["fisher"] = fisher_json(report.fisher);
    if (report.contrast_y_limit) j["contrast_y_limit"] = *report.contrast_y_limit;
    if (report.hessian_check) {
        ordered_json h;
        const std::size_t d = report.fisher.dim;
        h["avg_neg_eps2_hessian"] = matrix_json(report.hessian_check->avg_neg_eps2_hessian, d);
        h["max_rel_error_entrywise"] = matrix_json(report.hessian_check->max_rel_error_entrywise, d);
        h["replicates"] = report.hessian_check->replicates;
        j["hessian_check"] = h;
    }
    ordered_json blocks = ordered_json::array();
    for (const auto& b : report.blocks) {
        ordered_json jb;
        jb["epsilon"] = b.epsilon;
        jb["mean_u"] = vec_json(b.mean_u);
        jb["cov_u"] = matrix_json(b.cov_u, report.fisher.dim);
        jb["frobenius_rel_distance"] = b.frobenius_rel_distance;
        jb["boundary_hits"] = b.boundary_hits;
        jb["failures"] = b.failures;
        jb["unreliable"] = b.unreliable;
        if (b.contrast_mean_neg_y) {
            jb["contrast_mean_neg_y"] = *b.contrast_mean_neg_y;
            jb["contrast_stderr"] = *b.contrast_stderr;
        }
        ordered_json coords = ordered_json::array();
        for (const auto& c : b.coordinates) {
            ordered_json jc;
            jc["mean"] = c.mean;
            jc["variance"] = c.variance;
            jc["mean_stderr"] = c.mean_stderr;
            if (c.ks) jc["ks"] = ks_json(*c.ks);
            ordered_json moms = ordered_json::array();
            for (const auto& mcmp : c.moments) {
                ordered_json jm;
                jm["f"] = mcmp.name;
                jm["empirical"] = mcmp.empirical;
                jm["theoretical"] = mcmp.theoretical;
                moms.push_back(jm);
            }
            jc["moments"] = moms;
            jc["tail_freq"] = vec_json(c.tail_freq);
            jc["tail_expected"] = vec_json(c.tail_expected);
            coords.push_back(jc);
        }
        jb["coordinates"] = coords;
        ordered_json reps = ordered_json::array();
        for (const auto& r : b.replicates) {
            ordered_json jr;
            jr["index"] = r.index;
            jr["seed"] = r.seed;
            if (r.failed) {
                jr["failed"] = true;
                jr["error"] = r.error;
            } else {
                jr["estimate"] = estimation_json(r.estimate);
            }
            reps.push_back(jr);
        }
        jb["replicates"] = reps;
        blocks.push_back(jb);
    }
    j["epsilon_blocks"] = blocks;
    return j.dump(2) + "\n";
}

void write_replicates_csv(const std::filesystem::path& file, const EpsilonBlock& block) {
    std::ostringstream os;
    os << "index,seed";
    const std::size_t d = block.mean_u.size();
    for (std::size_t k = 0; k < d; ++k) os << ",theta_hat_" << (k + 1);
    for (std::size_t k = 0; k < d; ++k) os << ",u_" << (k + 1);
    os << ",loglik,converged,hit_boundary\n";
    for (const auto& r : block.replicates) {
        os << r.index << ',' << r.seed;
        if (r.failed) {
            for (std::size_t k = 0; k < 2 * d; ++k) os << ",nan";
            os << ",nan,0,0\n";
            continue;
        }
        for (std::size_t k = 0; k < d; ++k) os << ',' << format_double(r.estimate.theta_hat[k]);
        for (std::size_t k = 0; k < d; ++k) os << ',' << format_double(r.estimate.normalized_error[k]);
        os << ',' << format_double(r.estimate.loglik_at_hat) << ',' << (r.estimate.converged ? 1 : 0) << ','
           << (r.estimate.hit_boundary ? 1 : 0) << '\n';
    }
    write_text_file(file, os.str());
}

void write_study_summary_csv(const std::filesystem::path& file, const StudyReport& report) {
    std::ostringstream os;
    os << "epsilon,coordinate,metric,empirical,theoretical\n";
    for (const auto& b : report.blocks) {
        for (std::size_t k = 0; k < b.coordinates.size(); ++k) {
            const auto& c = b.coordinates[k];
            const std::string pre = format_double(b.epsilon) + "," + std::to_string(k + 1) + ",";
            os << pre << "mean," << format_double(c.mean) << ",0\n";
            os << pre << "variance," << format_double(c.variance) << ','
               << format_double(report.gamma_inv_diag[k]) << '\n';
            if (c.ks) {
                os << pre << "ks_statistic," << format_double(c.ks->statistic) << ",\n";
                os << pre << "ks_p_value," << format_double(c.ks->p_value) << ",\n";
            }
            for (const auto& mcmp : c.moments)
                os << pre << "moment_" << mcmp.name << ',' << format_double(mcmp.empirical) << ','
                   << format_double(mcmp.theoretical) << '\n';
            for (std::size_t r3 = 0; r3 < c.tail_freq.size(); ++r3)
                os << pre << "tail_" << (r3 + 1) << "sd," << format_double(c.tail_freq[r3]) << ','
                   << format_double(c.tail_expected[r3]) << '\n';
        }
        const std::string pre = format_double(b.epsilon) + ",all,";
        os << pre << "frobenius_rel_distance," << format_double(b.frobenius_rel_distance) << ",\n";
        os << pre << "boundary_hits," << b.boundary_hits << ",\n";
        os << pre << "failures," << b.failures << ",\n";
        if (b.contrast_mean_neg_y)
            os << pre << "contrast_mean_neg_y," << format_double(*b.contrast_mean_neg_y) << ','
               << format_double(report.contrast_y_limit.value_or(0.0)) << '\n';
    }
    write_text_file(file, os.str());
}

void write_histogram_csv(const std::filesystem::path& file, const StudyReport& report) {
    std::ostringstream os;
    os << "epsilon,coordinate,bin_center,count,normal_density\n";
    constexpr int kBins = 25;
    for (const auto& b : report.blocks) {
        for (std::size_t k = 0; k < b.coordinates.size(); ++k) {
            const double sd = std::sqrt(report.gamma_inv_diag[k]);
            const double lo = -4.0 * sd, hi = 4.0 * sd;
            const double w = (hi - lo) / kBins;
            std::vector<std::size_t> counts(kBins, 0);
            for (const auto& r : b.replicates) {
                if (r.failed) continue;
                const double u = r.estimate.normalized_error[k];
                int bin = static_cast<int>(std::floor((u - lo) / w));
                if (bin >= 0 && bin < kBins) ++counts[bin];
            }
            for (int bin = 0; bin < kBins; ++bin) {
                const double ctr = lo + (bin + 0.5) * w;
                const double dens =
                    std::exp(-0.5 * ctr * ctr / (sd * sd)) / (sd * std::sqrt(2.0 * std::numbers::pi));
                os << format_double(b.epsilon) << ',' << (k + 1) << ',' << format_double(ctr) << ',' << counts[bin]
                   << ',' << format_double(dens) << '\n';
            }
        }
    }
    write_text_file(file, os.str());
}

void write_study_summary_text(const std::filesystem::path& file, const StudyReport& report) {
    std::ostringstream os;
    os << "study summary (seed " << report.master_seed << ")\n";
    os << "gamma_inv diagonal:";
    for (double v : report.gamma_inv_diag) os << ' ' << format_double(v);
    os << '\n';
    for (const auto& b : report.blocks) {
        os << "\nepsilon = " << format_double(b.epsilon) << "  (failures " << b.failures << ", boundary hits "
           << b.boundary_hits << (b.unreliable ? ", UNRELIABLE" : "") << ")\n";
        for (std::size_t k = 0; k < b.coordinates.size(); ++k) {
            const auto& c = b.coordinates[k];
            os << "  u_" << (k + 1) << ": mean " << format_double(c.mean) << " (se " << format_double(c.mean_stderr)
               << "), var " << format_double(c.variance) << " vs " << format_double(report.gamma_inv_diag[k]);
            if (c.ks) os << ", KS p " << format_double(c.ks->p_value);
            os << '\n';
        }
        os << "  |cov - gamma_inv|_F rel = " << format_double(b.frobenius_rel_distance) << '\n';
        if (b.contrast_mean_neg_y)
            os << "  contrast: mean(-Y_eps) = " << format_double(*b.contrast_mean_neg_y) << " vs Y_H = "
               << format_double(report.contrast_y_limit.value_or(0.0)) << '\n';
    }
    if (report.hessian_check) {
        double worst = 0.0;
        for (double v : report.hessian_check->max_rel_error_entrywise) worst = std::max(worst, v);
        os << "\nhessian/fisher agreement: worst entrywise rel error " << format_double(worst) << " over "
           << report.hessian_check->replicates << " replicates\n";
    }
    write_text_file(file, os.str());
}

}  // namespace fracdrift
