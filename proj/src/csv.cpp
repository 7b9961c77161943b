#include "mrsde/csv.hpp"

#include <cstdio>
#include <fstream>

#include "mrsde/errors.hpp"

namespace mrsde {

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw numerical_error("cannot open output file: " + path);
    return out;
}

}  // namespace

void write_path_csv(const std::string& path, const PathBundle& bundle) {
    auto out = open_out(path);
    const bool with_oracle = bundle.oracle_k.size() == bundle.times.size();
    out << "t,K_hat,mean_constraint" << (with_oracle ? ",K_oracle" : "") << "\n";
    for (std::size_t k = 0; k < bundle.times.size(); ++k) {
        out << format_double(bundle.times[k]) << ',' << format_double(bundle.khat[k]) << ','
            << format_double(bundle.mean_constraint[k]);
        if (with_oracle) out << ',' << format_double(bundle.oracle_k[k]);
        out << '\n';
    }
}

void write_oracle_csv(const std::string& path, std::span<const double> times,
                      std::span<const double> oracle_k) {
    if (times.size() != oracle_k.size()) {
        throw numerical_error("oracle csv needs matching time and value columns");
    }
    auto out = open_out(path);
    out << "t,K_oracle\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        out << format_double(times[k]) << ',' << format_double(oracle_k[k]) << '\n';
    }
}

void write_rate_csv(const std::string& path, const RateStudy& study) {
    auto out = open_out(path);
    out << "param,E_hat\n";
    for (const auto& [value, e_hat] : study.points) {
        out << format_double(value) << ',' << format_double(e_hat) << '\n';
    }
    out << "slope," << format_double(study.fit.slope) << '\n';
    out << "intercept," << format_double(study.fit.intercept) << '\n';
    out << "r2," << format_double(study.fit.r2) << '\n';
}

}  // namespace mrsde
