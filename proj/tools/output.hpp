#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgl/evolution.hpp"

namespace fgl::cli {

/// Collects every artifact of one command and writes them from a single
/// thread once the computation is complete.
class OutputSet {
public:
    OutputSet(std::filesystem::path dir, std::string command);

    const std::filesystem::path& dir() const { return dir_; }
    const std::string& command() const { return command_; }

    /// Columns t, dt, mass, h1, lp1, sup, then Q_<label> per weight.
    void add_series(const std::string& stem, const TimeSeries& series);
    /// Preformatted CSV table "<command>_<stem>.csv".
    void add_csv(const std::string& stem, std::string body);
    void add_json(const std::string& stem, const nlohmann::json& doc);
    /// Two-column curve "<command>_plot_<name>.txt" listed in the descriptor.
    void add_plot(const std::string& name, const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& x_label, const std::string& y_label, const std::string& scale = "linear");

    /// Writes all files, the plot descriptor and the manifest. Returns the
    /// file names written (relative to dir).
    std::vector<std::string> write(const nlohmann::json& manifest_fields);

private:
    struct File {
        std::string name;
        std::string body;
    };

    std::string prefixed(const std::string& stem, const char* ext) const;

    std::filesystem::path dir_;
    std::string command_;
    std::vector<File> files_;
    nlohmann::json plots_ = nlohmann::json::array();
};

std::string series_csv(const TimeSeries& series);

/// Shortest round-trip decimal text for finite values, "nan"/"inf" otherwise.
std::string csv_real(double v);

/// JSON number, or null when not finite.
nlohmann::json json_real(double v);

}  // namespace fgl::cli
