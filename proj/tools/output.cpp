#include "output.hpp"

#include <cmath>
#include <fstream>

#include "config.hpp"
#include "fgl/error.hpp"

namespace fgl::cli {

std::string csv_real(double v) { return format_real(v); }

nlohmann::json json_real(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string series_csv(const TimeSeries& series) {
    std::string out = "t,dt,mass,h1,lp1,sup";
    for (const auto& w : series.weights) out += ",Q_" + w.label();
    out += '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += csv_real(series.times[i]);
        for (double v : {series.dt[i], series.mass[i], series.h1[i], series.lp1[i], series.sup[i]})
            out += ',' + csv_real(v);
        for (const auto& q : series.momentum) out += ',' + csv_real(q[i]);
        out += '\n';
    }
    return out;
}

OutputSet::OutputSet(std::filesystem::path dir, std::string command)
    : dir_(std::move(dir)), command_(std::move(command)) {}

std::string OutputSet::prefixed(const std::string& stem, const char* ext) const {
    return command_ + "_" + stem + ext;
}

void OutputSet::add_series(const std::string& stem, const TimeSeries& series) {
    files_.push_back({prefixed(stem, ".csv"), series_csv(series)});
}

void OutputSet::add_csv(const std::string& stem, std::string body) {
    files_.push_back({prefixed(stem, ".csv"), std::move(body)});
}

void OutputSet::add_json(const std::string& stem, const nlohmann::json& doc) {
    files_.push_back({prefixed(stem, ".json"), doc.dump(2) + "\n"});
}

void OutputSet::add_plot(const std::string& name, const std::vector<double>& x, const std::vector<double>& y,
                         const std::string& x_label, const std::string& y_label, const std::string& scale) {
    if (x.size() != y.size()) throw Error(ErrorKind::invalid_argument, "plot '" + name + "': length mismatch");
    std::string body = "# " + x_label + " " + y_label + "\n";
    for (std::size_t i = 0; i < x.size(); ++i) body += csv_real(x[i]) + ' ' + csv_real(y[i]) + '\n';
    const auto file = prefixed("plot_" + name, ".txt");
    files_.push_back({file, std::move(body)});
    plots_.push_back({{"file", file}, {"name", name}, {"x", x_label}, {"y", y_label}, {"scale", scale}});
}

std::vector<std::string> OutputSet::write(const nlohmann::json& manifest_fields) {
    std::filesystem::create_directories(dir_);
    if (!plots_.empty()) files_.push_back({prefixed("plots", ".json"), nlohmann::json{{"curves", plots_}}.dump(2) + "\n"});

    std::vector<std::string> names;
    for (const auto& f : files_) names.push_back(f.name);
    const auto manifest_name = prefixed("manifest", ".json");
    names.push_back(manifest_name);

    nlohmann::json manifest = manifest_fields;
    manifest["outputs"] = names;
    manifest["out_dir"] = dir_.string();
    files_.push_back({manifest_name, manifest.dump(2) + "\n"});

    for (const auto& f : files_) {
        const auto path = dir_ / f.name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << f.body;
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    return names;
}

}  // namespace fgl::cli
