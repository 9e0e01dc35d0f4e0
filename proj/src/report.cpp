#include "hazardgrid/report.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

namespace hazardgrid {

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, end);
    if (s.find_first_of(".eEn") == std::string::npos) // "n" covers inf/nan
        s += ".0";
    return s;
}

std::vector<SuccessCurve> aggregate(const std::vector<EpisodeResult>& results, int episodes_per_epoch)
{
    if (episodes_per_epoch < 1)
        throw ConfigError("episodes_per_epoch must be >= 1");
    std::map<CurveKey, SuccessCurve> groups;
    for (const auto& r : results) {
        if (r.episode < 0)
            throw ConfigError("negative episode index in results");
        const CurveKey key{r.size, r.density, r.kind};
        auto& curve = groups[key];
        curve.key = key;
        const auto epoch = static_cast<std::size_t>(r.episode / episodes_per_epoch);
        if (curve.counts.size() <= epoch) {
            curve.counts.resize(epoch + 1, 0);
            curve.successes.resize(epoch + 1, 0);
        }
        ++curve.counts[epoch];
        curve.successes[epoch] += r.outcome == EpisodeStatus::Success ? 1 : 0;
    }

    std::vector<SuccessCurve> curves;
    curves.reserve(groups.size());
    for (auto& [key, curve] : groups) {
        curve.rates.resize(curve.counts.size());
        for (std::size_t e = 0; e < curve.counts.size(); ++e) {
            if (curve.counts[e] == 0)
                throw ConfigError("epoch " + std::to_string(e) + " of " + std::to_string(key.size) + "/" +
                                  std::string(to_string(key.density)) + "/" + std::string(to_string(key.kind)) +
                                  " has no episodes to average");
            curve.rates[e] = static_cast<double>(curve.successes[e]) / static_cast<double>(curve.counts[e]);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

void write_results_csv(std::ostream& out, const std::vector<EpisodeResult>& results, int episodes_per_epoch)
{
    out << results_csv_header << '\n';
    for (const auto& r : results) {
        out << r.size << ',' << to_string(r.density) << ',' << to_string(r.kind) << ',' << r.repetition << ','
            << r.episode << ',' << r.episode / episodes_per_epoch << ',' << to_string(r.outcome) << ',' << r.steps << ','
            << format_double(r.epsilon) << '\n';
    }
}

void write_curves_csv(std::ostream& out, const std::vector<SuccessCurve>& curves)
{
    out << curves_csv_header << '\n';
    for (const auto& c : curves)
        for (std::size_t e = 0; e < c.rates.size(); ++e)
            out << c.key.size << ',' << to_string(c.key.density) << ',' << to_string(c.key.kind) << ',' << e << ','
                << format_double(c.rates[e]) << '\n';
}

namespace {

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(ch);
        }
    }
    return out;
}

std::string fixed2(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

} // namespace

void write_svg(std::ostream& out, const std::vector<SuccessCurve>& curves, const std::string& title)
{
    constexpr double width = 640, height = 400;
    constexpr double left = 60, right = 150, top = 40, bottom = 50;
    constexpr double plot_w = width - left - right, plot_h = height - top - bottom;

    std::size_t epochs = 1;
    for (const auto& c : curves)
        epochs = std::max(epochs, c.rates.size());
    const double x_span = epochs > 1 ? static_cast<double>(epochs - 1) : 1.0;
    auto px = [&](std::size_t e) { return left + plot_w * static_cast<double>(e) / x_span; };
    auto py = [&](double rate) { return top + plot_h * (1.0 - rate); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title)
        << "</text>\n";

    // Axes with ticks at 0, 0.25, ... 1.
    out << "  <g stroke=\"black\" stroke-width=\"1\">\n";
    out << "    <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\"/>\n";
    out << "    <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h << "\"/>\n";
    out << "  </g>\n";
    out << "  <g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double rate = i / 4.0;
        out << "    <text x=\"" << left - 6 << "\" y=\"" << fixed2(py(rate) + 3) << "\" text-anchor=\"end\">"
            << fixed2(rate) << "</text>\n";
    }
    const std::size_t step = std::max<std::size_t>(1, epochs / 10);
    for (std::size_t e = 0; e < epochs; e += step)
        out << "    <text x=\"" << fixed2(px(e)) << "\" y=\"" << top + plot_h + 14 << "\" text-anchor=\"middle\">" << e
            << "</text>\n";
    out << "  </g>\n";
    out << "  <text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">epoch</text>\n";
    out << "  <text x=\"16\" y=\"" << top + plot_h / 2 << "\" font-family=\"sans-serif\" font-size=\"12\" "
        << "text-anchor=\"middle\" transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">success rate</text>\n";

    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& c = curves[i];
        const char* color = palette[i % std::size(palette)];
        out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t e = 0; e < c.rates.size(); ++e)
            out << (e ? " " : "") << fixed2(px(e)) << ',' << fixed2(py(c.rates[e]));
        out << "\"/>\n";

        const double ly = top + 14.0 * static_cast<double>(i) + 6;
        const std::string label = std::string(to_string(c.key.kind)) + " (" + std::to_string(c.key.size) + ", " +
                                  std::string(to_string(c.key.density)) + ")";
        out << "  <line x1=\"" << left + plot_w + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 28
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "  <text x=\"" << left + plot_w + 32 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << xml_escape(label) << "</text>\n";
    }
    out << "</svg>\n";
}

namespace {

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

void finish(std::ofstream& out, const std::string& path)
{
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace

void write_results_csv(const std::string& path, const std::vector<EpisodeResult>& results, int episodes_per_epoch)
{
    auto out = open_output(path);
    write_results_csv(out, results, episodes_per_epoch);
    finish(out, path);
}

void write_curves_csv(const std::string& path, const std::vector<SuccessCurve>& curves)
{
    auto out = open_output(path);
    write_curves_csv(out, curves);
    finish(out, path);
}

void write_svg(const std::string& path, const std::vector<SuccessCurve>& curves, const std::string& title)
{
    auto out = open_output(path);
    write_svg(out, curves, title);
    finish(out, path);
}

void write_benchmark_outputs(const std::string& out_dir, const BenchmarkOutput& output, int episodes_per_epoch)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    auto emit = [&](const std::string& prefix, const std::vector<EpisodeResult>& results,
                    const std::vector<SuccessCurve>& curves) {
        write_results_csv(path(prefix + "results.csv"), results, episodes_per_epoch);
        write_curves_csv(path(prefix + "curves.csv"), curves);
        std::map<std::pair<int, Density>, std::vector<SuccessCurve>> panels;
        for (const auto& c : curves)
            panels[{c.key.size, c.key.density}].push_back(c);
        for (const auto& [key, group] : panels) {
            const std::string tag = std::to_string(key.first) + "_" + std::string(to_string(key.second));
            const std::string title = std::to_string(key.first) + "x" + std::to_string(key.first) + " " +
                                      std::string(to_string(key.second)) + (prefix.empty() ? "" : " (greedy)") +
                                      " success rate";
            write_svg(path(prefix + "curves_" + tag + ".svg"), group, title);
        }
    };
    emit("", output.results, output.curves);
    if (!output.greedy_results.empty())
        emit("greedy_", output.greedy_results, output.greedy_curves);
}

} // namespace hazardgrid
