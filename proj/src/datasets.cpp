#include "wspline/datasets.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wspline/rng.hpp"

namespace wspline {

TimedSequence gen_diverging_gaussian(std::uint64_t seed, std::size_t n, std::size_t steps,
                                     std::size_t dim) {
    if (n < 1) fail(ErrorCode::BadConfig, "need n >= 1");
    if (steps < 2) fail(ErrorCode::BadConfig, "need steps >= 2");
    if (dim < 1) fail(ErrorCode::BadConfig, "need dim >= 1");

    SeededRng rng(seed);
    constexpr std::size_t branches = 3;
    constexpr double kPi = 3.14159265358979323846;

    std::vector<double> times;
    std::vector<DiscreteMeasure> clouds;
    for (std::size_t s = 0; s < steps; ++s) {
        const double radius = static_cast<double>(s); // branch centers drift outward
        const double sigma = 0.06 + 0.08 * static_cast<double>(s);
        std::vector<double> pts(n * dim);
        for (std::size_t i = 0; i < n; ++i) {
            double center[2] = {0.0, 0.0};
            if (s > 0) {
                const double angle = 2.0 * kPi * static_cast<double>(i % branches) /
                                     static_cast<double>(branches);
                center[0] = radius * std::cos(angle);
                center[1] = radius * std::sin(angle);
            }
            for (std::size_t k = 0; k < dim; ++k) {
                const double mean = (k < 2) ? center[k] : 0.0;
                pts[i * dim + k] = rng.normal(mean, sigma);
            }
        }
        clouds.emplace_back(std::move(pts), dim);
        times.push_back(static_cast<double>(s));
    }
    return TimedSequence(std::move(times), std::move(clouds));
}

TimedSequence gen_converging_gaussian(std::uint64_t seed, std::vector<std::size_t> counts,
                                      std::size_t dim) {
    if (counts.size() < 2) fail(ErrorCode::BadConfig, "need at least two steps");
    for (std::size_t c : counts)
        if (c < 1) fail(ErrorCode::BadConfig, "every step needs at least one atom");
    if (dim < 2) fail(ErrorCode::BadConfig, "need dim >= 2");

    SeededRng rng(seed);
    const std::size_t steps = counts.size();
    const std::size_t unit = counts.front();

    std::vector<double> times;
    std::vector<DiscreteMeasure> clouds;
    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t n = counts[s];
        // component count follows the atom count relative to the first cloud
        // (e.g. 32,96,64,32 -> 1,3,2,1): branching out, then merging back
        std::size_t k = (s == 0 || s + 1 == steps) ? 1 : std::max<std::size_t>(1, n / unit);
        const double fold = 1.0 - static_cast<double>(s) / static_cast<double>(steps - 1);
        const double spread = 1.6 * fold; // branch separation closes over time
        std::vector<double> pts(n * dim);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t comp = i % k;
            const double off = (k == 1) ? 0.0
                                        : spread * (static_cast<double>(comp) -
                                                    0.5 * static_cast<double>(k - 1));
            for (std::size_t c = 0; c < dim; ++c) {
                double mean = 0.0;
                if (c == 0) mean = static_cast<double>(s);
                if (c == 1) mean = off;
                pts[i * dim + c] = rng.normal(mean, 0.15);
            }
        }
        clouds.emplace_back(std::move(pts), dim);
        times.push_back(static_cast<double>(s));
    }
    return TimedSequence(std::move(times), std::move(clouds));
}

namespace {

double parse_double(const std::string& field, std::size_t line_no) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        fail(ErrorCode::ParseError,
             "bad numeric field '" + field + "' on line " + std::to_string(line_no));
    return value;
}

} // namespace

TimedSequence load_sequence_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::ParseError, "empty file " + path);
    if (line.rfind("step,time,mass,x0", 0) != 0)
        fail(ErrorCode::ParseError, "unexpected header '" + line + "'");
    std::size_t dim = 1;
    for (char ch : line)
        if (ch == ',') ++dim;
    dim -= 3; // step,time,mass columns

    std::vector<double> times;
    std::vector<std::vector<double>> step_points;
    std::vector<std::vector<double>> step_masses;
    long last_step = -1;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != dim + 3)
            fail(ErrorCode::ParseError, "row with " + std::to_string(fields.size()) +
                                            " fields (expected " + std::to_string(dim + 3) +
                                            ") on line " + std::to_string(line_no));

        const double step_val = parse_double(fields[0], line_no);
        const long step = static_cast<long>(step_val);
        if (step_val != static_cast<double>(step) || step < 0)
            fail(ErrorCode::ParseError, "bad step index on line " + std::to_string(line_no));
        const double time = parse_double(fields[1], line_no);
        const double mass = parse_double(fields[2], line_no);
        if (mass < 0.0)
            fail(ErrorCode::ParseError, "negative mass on line " + std::to_string(line_no));

        if (step == last_step + 1) {
            if (!times.empty() && !(time > times.back()))
                fail(ErrorCode::ParseError,
                     "times must be strictly increasing (line " + std::to_string(line_no) + ")");
            times.push_back(time);
            step_points.emplace_back();
            step_masses.emplace_back();
            last_step = step;
        } else if (step != last_step) {
            fail(ErrorCode::ParseError,
                 "rows must be sorted by step (line " + std::to_string(line_no) + ")");
        } else if (time != times.back()) {
            fail(ErrorCode::ParseError,
                 "rows of one step must share its time (line " + std::to_string(line_no) + ")");
        }
        for (std::size_t k = 0; k < dim; ++k)
            step_points.back().push_back(parse_double(fields[3 + k], line_no));
        step_masses.back().push_back(mass);
    }
    if (times.empty()) fail(ErrorCode::ParseError, "no data rows in " + path);

    std::vector<DiscreteMeasure> clouds;
    clouds.reserve(times.size());
    for (std::size_t s = 0; s < times.size(); ++s) {
        try {
            clouds.emplace_back(std::move(step_points[s]), dim, std::move(step_masses[s]));
        } catch (const Error& e) {
            fail(ErrorCode::ParseError,
                 "step " + std::to_string(s) + " is not a valid measure: " + e.what());
        }
    }
    return TimedSequence(std::move(times), std::move(clouds));
}

void save_sequence_csv(const TimedSequence& seq, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);

    const std::size_t d = seq.dim();
    out << "step,time,mass";
    for (std::size_t k = 0; k < d; ++k) out << ",x" << k;
    out << "\n";

    char buf[40];
    const auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t s = 0; s < seq.size(); ++s) {
        const auto& mu = seq.measure(s);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            out << s << ',';
            emit(seq.time(s));
            out << ',';
            emit(mu.weight(i));
            for (std::size_t k = 0; k < d; ++k) {
                out << ',';
                emit(mu.point(i)[k]);
            }
            out << "\n";
        }
    }
    if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

} // namespace wspline
