#include "lexichron/csv.hpp"

#include "lexichron/error.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace lexichron {

std::string fmt_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string fmt_optional(const std::optional<double>& value) {
    if (!value || std::isnan(*value))
        return "NA";
    return fmt_double(*value);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty())
        dir = ".";
    fs::path tmp = dir / (target.filename().string() + ".tmp." +
                          std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            raise(ErrKind::IoError, "cannot create '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            raise(ErrKind::IoError, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        raise(ErrKind::IoError, "cannot rename into '" + path + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(ErrKind::IoError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

template <typename T, typename Fmt>
std::string matrix_csv_impl(const std::string& schema,
                            const std::vector<std::string>& labels,
                            const std::vector<T>& values, Fmt fmt) {
    const std::size_t n = labels.size();
    std::ostringstream out;
    out << "# schema: " << schema << '\n';
    out << "language";
    for (const auto& label : labels)
        out << ',' << label;
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        out << labels[i];
        for (std::size_t j = 0; j < n; ++j)
            out << ',' << fmt(values[i * n + j]);
        out << '\n';
    }
    return out.str();
}

} // namespace

std::string matrix_csv(const std::string& schema,
                       const std::vector<std::string>& labels,
                       const std::vector<double>& values) {
    return matrix_csv_impl(schema, labels, values, [](double v) {
        return std::isnan(v) ? std::string("NA") : fmt_double(v);
    });
}

std::string matrix_csv(const std::string& schema,
                       const std::vector<std::string>& labels,
                       const std::vector<std::size_t>& values) {
    return matrix_csv_impl(schema, labels, values,
                           [](std::size_t v) { return std::to_string(v); });
}

} // namespace lexichron
