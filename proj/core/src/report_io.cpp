#include "radlab/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "radlab/error.hpp"

namespace radlab::runner {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

Formats parse_formats(const std::string& list) {
    Formats f{false, false};
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        item = b == std::string::npos ? "" : item.substr(b, e - b + 1);
        if (item == "json")
            f.json = true;
        else if (item == "csv")
            f.csv = true;
        else
            throw ValidationError("unknown output format \"" + item + "\" (expected json, csv)");
    }
    if (!f.json && !f.csv) throw ValidationError("no output format selected");
    return f;
}

std::string format_csv(const Series& series, const std::string& scenario_id) {
    std::string out = "# " + series.quantity + ", " + scenario_id;
    for (const auto& c : series.columns) out += ", " + c;
    out += '\n';
    char buf[32];
    for (const auto& row : series.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            if (i) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::vector<std::filesystem::path> emit_report(const Report& report, const std::filesystem::path& out_dir,
                                               const Formats& formats) {
    const auto dir = out_dir / report.scenario_id;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    if (formats.json) {
        const auto path = dir / "report.json";
        write_file(path, report.to_json().dump(2) + "\n");
        written.push_back(path);
    }
    if (formats.csv) {
        for (const auto& s : report.series) {
            const auto path = dir / (s.quantity + ".csv");
            write_file(path, format_csv(s, report.scenario_id));
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace radlab::runner
