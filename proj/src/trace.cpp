#include "trace.hpp"

#include <stdexcept>

#include "csv.hpp"

namespace barker {

double Trace::acceptance_rate() const {
    if (accepted.empty()) return 0.0;
    long long n = 0;
    for (auto a : accepted) n += a ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(accepted.size());
}

void Trace::write_csv(const std::string& path) const {
    const long long n = iterations();
    const int d = dim();
    std::string out;
    out.reserve(static_cast<std::size_t>(n) * (static_cast<std::size_t>(d) + 1) * 20 + 64);
    for (int j = 0; j < d; ++j) {
        out += "x";
        out += std::to_string(j);
        out += ",";
    }
    out += "accepted\n";
    for (long long i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            append_double(out, samples(i, j));
            out += ",";
        }
        out += accepted[static_cast<std::size_t>(i)] ? "1" : "0";
        out += "\n";
    }
    write_file(path, out);
}

void Trace::write_adaptation_csv(const std::string& path) const {
    if (adapt_history.size() == 0)
        throw std::runtime_error("trace has no adaptation history");
    const long long n = adapt_history.rows();
    const int d = static_cast<int>(adapt_history.cols()) - 1;
    std::string out;
    out.reserve(static_cast<std::size_t>(n) * (static_cast<std::size_t>(d) + 2) * 20 + 64);
    out += "iteration,global_scale";
    for (int j = 0; j < d; ++j) {
        out += ",sigma";
        out += std::to_string(j);
    }
    out += "\n";
    for (long long i = 0; i < n; ++i) {
        out += std::to_string(i + 1);
        for (int j = 0; j <= d; ++j) {
            out += ",";
            append_double(out, adapt_history(i, j));
        }
        out += "\n";
    }
    write_file(path, out);
}

}  // namespace barker
