#include "kisched/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kisched/errors.hpp"

namespace kisched {

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string join_params(const std::vector<double>& params) {
    std::string out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ',';
        out += g17(params[i]);
    }
    return out;
}

std::vector<double> split_params(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw FormatError("dataset header: bad params entry '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

} // namespace

void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("dataset: cannot open for writing: " + path);
    if (ds.meta) {
        const DatasetMeta& m = *ds.meta;
        out << "# kisched-dataset v1\n";
        out << "# family=" << m.family << " n=" << m.n << " split=" << m.split
            << " count=" << m.count << " master_seed=" << m.master_seed
            << " params=" << join_params(m.params) << '\n';
    }
    for (const GraphRecord& rec : ds.records) {
        out << write_record(rec) << '\n';
    }
    if (!out) throw FormatError("dataset: write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("dataset: cannot open: " + path);
    Dataset ds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            // second header line carries the metadata key=value pairs
            if (line.rfind("# family=", 0) == 0) {
                DatasetMeta meta;
                std::istringstream hs(line.substr(1));
                std::string kv;
                while (hs >> kv) {
                    const auto eq = kv.find('=');
                    if (eq == std::string::npos)
                        throw FormatError("dataset header: expected key=value, got '" + kv + "'");
                    const std::string key = kv.substr(0, eq);
                    const std::string val = kv.substr(eq + 1);
                    if (key == "family") meta.family = val;
                    else if (key == "n") meta.n = std::atoi(val.c_str());
                    else if (key == "split") meta.split = val;
                    else if (key == "count") meta.count = std::strtoull(val.c_str(), nullptr, 10);
                    else if (key == "master_seed") meta.master_seed = std::strtoull(val.c_str(), nullptr, 10);
                    else if (key == "params") meta.params = split_params(val);
                    else throw FormatError("dataset header: unknown key '" + key + "'");
                }
                ds.meta = std::move(meta);
            }
            continue;
        }
        try {
            ds.records.push_back(parse_record(line));
        } catch (const FormatError& e) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return ds;
}

} // namespace kisched
