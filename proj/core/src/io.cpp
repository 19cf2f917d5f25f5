#include "vsdk/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vsdk/errors.hpp"

namespace vsdk {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double parse_double(const std::string& tok, std::size_t line) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == s || *end != '\0')
        throw ParseError("bad number '" + tok + "'", line);
    if (!std::isfinite(v)) throw ParseError("non-finite value '" + tok + "'", line);
    return v;
}

int parse_int(const std::string& tok, std::size_t line) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == s || *end != '\0')
        throw ParseError("bad integer '" + tok + "'", line);
    return static_cast<int>(v);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void check_finite_write(double v) {
    if (!std::isfinite(v)) throw DomainError("csv write: non-finite value");
}

// Shared x,y[,third] reader. columns == 2 reads bare nodes; columns == 3
// reads a third real (third_int == false) or integer column.
struct Rows {
    NodeSet::Storage pts;
    Eigen::VectorXd third;
    std::vector<int> third_int;
};

Rows read_xy_csv(const std::string& path, const std::string& header, int columns, bool third_int) {
    const std::string text = slurp(path);
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty file: " + path, 1);
    ++lineno;
    {
        auto cols = split_csv(line);
        std::string got;
        for (std::size_t i = 0; i < cols.size(); ++i) got += (i ? "," : "") + cols[i];
        if (got != header)
            throw ParseError("expected header '" + header + "', got '" + got + "'", lineno);
    }

    std::vector<double> xs, ys, ts;
    std::vector<int> zs;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cols = split_csv(line);
        if (static_cast<int>(cols.size()) != columns)
            throw ParseError("expected " + std::to_string(columns) + " columns, got " +
                                 std::to_string(cols.size()),
                             lineno);
        xs.push_back(parse_double(cols[0], lineno));
        ys.push_back(parse_double(cols[1], lineno));
        if (columns == 3) {
            if (third_int)
                zs.push_back(parse_int(cols[2], lineno));
            else
                ts.push_back(parse_double(cols[2], lineno));
        }
    }

    Rows rows;
    rows.pts.resize(static_cast<Eigen::Index>(xs.size()), 2);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        rows.pts(static_cast<Eigen::Index>(i), 0) = xs[i];
        rows.pts(static_cast<Eigen::Index>(i), 1) = ys[i];
    }
    rows.third = Eigen::Map<const Eigen::VectorXd>(ts.data(), static_cast<Eigen::Index>(ts.size()));
    rows.third_int = std::move(zs);
    return rows;
}

std::string csv_text(const NodeSet& nodes, const std::string& header,
                     const Eigen::VectorXd* vals, const std::vector<int>* labels) {
    if (nodes.dim() != 2) throw ParameterError("csv write: only 2-D nodes are supported");
    std::string out = header + "\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        check_finite_write(nodes.coord(i, 0));
        check_finite_write(nodes.coord(i, 1));
        out += fmt_g17(nodes.coord(i, 0)) + "," + fmt_g17(nodes.coord(i, 1));
        if (vals) {
            const double v = (*vals)(static_cast<Eigen::Index>(i));
            check_finite_write(v);
            out += "," + fmt_g17(v);
        }
        if (labels) out += "," + std::to_string((*labels)[i]);
        out += "\n";
    }
    return out;
}

void check_lengths(std::size_t n_nodes, std::size_t n_vals, const char* what) {
    if (n_nodes != n_vals)
        throw ParameterError(std::string(what) + ": nodes/values length mismatch (" +
                             std::to_string(n_nodes) + " vs " + std::to_string(n_vals) + ")");
}

} // namespace

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParameterError("cannot open file for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ParameterError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ParameterError("rename failed: " + tmp + " -> " + path);
}

void write_nodes_csv(const std::string& path, const NodeSet& nodes) {
    atomic_write(path, csv_text(nodes, "x,y", nullptr, nullptr));
}

NodeSet read_nodes_csv(const std::string& path) {
    Rows rows = read_xy_csv(path, "x,y", 2, false);
    return NodeSet(std::move(rows.pts));
}

void write_data_csv(const std::string& path, const NodeSet& nodes,
                    const Eigen::VectorXd& values) {
    check_lengths(nodes.size(), static_cast<std::size_t>(values.size()), "write_data_csv");
    atomic_write(path, csv_text(nodes, "x,y,f", &values, nullptr));
}

DataSet read_data_csv(const std::string& path) {
    Rows rows = read_xy_csv(path, "x,y,f", 3, false);
    return DataSet{NodeSet(std::move(rows.pts)), std::move(rows.third)};
}

void write_eval_csv(const std::string& path, const NodeSet& points,
                    const Eigen::VectorXd& values) {
    check_lengths(points.size(), static_cast<std::size_t>(values.size()), "write_eval_csv");
    atomic_write(path, csv_text(points, "x,y,v", &values, nullptr));
}

DataSet read_eval_csv(const std::string& path) {
    Rows rows = read_xy_csv(path, "x,y,v", 3, false);
    return DataSet{NodeSet(std::move(rows.pts)), std::move(rows.third)};
}

void write_labels_csv(const std::string& path, const LabeledData& data) {
    check_lengths(data.nodes.size(), data.labels.size(), "write_labels_csv");
    atomic_write(path, csv_text(data.nodes, "x,y,z", nullptr, &data.labels));
}

LabeledData read_labels_csv(const std::string& path) {
    Rows rows = read_xy_csv(path, "x,y,z", 3, true);
    return LabeledData{NodeSet(std::move(rows.pts)), std::move(rows.third_int)};
}

GridImage image_from_grid_values(const Eigen::VectorXd& values, int M) {
    if (M < 1 || values.size() != static_cast<Eigen::Index>(M) * M)
        throw ParameterError("image_from_grid_values: values are not an M x M grid");
    GridImage img;
    img.width = M;
    img.height = M;
    img.values.resize(static_cast<std::size_t>(M) * static_cast<std::size_t>(M));
    for (int row = 0; row < M; ++row) {
        const int j = M - 1 - row; // grid rows ascend in y; image rows descend
        for (int i = 0; i < M; ++i)
            img.values[static_cast<std::size_t>(row) * static_cast<std::size_t>(M) +
                       static_cast<std::size_t>(i)] =
                values(static_cast<Eigen::Index>(j) * M + i);
    }
    img.vmin = values.minCoeff();
    img.vmax = values.maxCoeff();
    return img;
}

void write_pgm(const std::string& path, const GridImage& image, bool binary) {
    if (image.width < 1 || image.height < 1 ||
        image.values.size() !=
            static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height))
        throw ParameterError("write_pgm: inconsistent image dimensions");
    const double span = image.vmax - image.vmin;
    std::string out = binary ? "P5\n" : "P2\n";
    out += "# range min=" + fmt_g17(image.vmin) + " max=" + fmt_g17(image.vmax) + "\n";
    out += std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    for (std::size_t p = 0; p < image.values.size(); ++p) {
        const double v = image.values[p];
        if (!std::isfinite(v)) throw DomainError("write_pgm: non-finite value");
        const double t = span > 0.0 ? (v - image.vmin) / span : 0.0;
        const int gray = std::clamp(static_cast<int>(std::lround(t * 255.0)), 0, 255);
        if (binary)
            out += static_cast<char>(static_cast<unsigned char>(gray));
        else
            out += std::to_string(gray) + ((p + 1) % static_cast<std::size_t>(image.width) ? " " : "\n");
    }
    atomic_write(path, out);
}

GridImage read_pgm(const std::string& path) {
    const std::string text = slurp(path);
    std::size_t pos = 0;
    std::size_t lineno = 1;
    GridImage img;
    bool have_range = false;

    auto next_token = [&]() -> std::string {
        for (;;) {
            while (pos < text.size() &&
                   (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' ||
                    text[pos] == '\n')) {
                if (text[pos] == '\n') ++lineno;
                ++pos;
            }
            if (pos < text.size() && text[pos] == '#') {
                const std::size_t eol = text.find('\n', pos);
                const std::string comment =
                    text.substr(pos, (eol == std::string::npos ? text.size() : eol) - pos);
                const std::size_t mn = comment.find("min=");
                const std::size_t mx = comment.find("max=");
                if (mn != std::string::npos && mx != std::string::npos) {
                    img.vmin = parse_double(comment.substr(mn + 4, mx - (mn + 4) - 1), lineno);
                    img.vmax = parse_double(comment.substr(mx + 4), lineno);
                    have_range = true;
                }
                pos = (eol == std::string::npos) ? text.size() : eol;
                continue;
            }
            break;
        }
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] != ' ' && text[pos] != '\t' && text[pos] != '\r' &&
               text[pos] != '\n' && text[pos] != '#')
            ++pos;
        if (start == pos) throw ParseError("unexpected end of PGM file", lineno);
        return text.substr(start, pos - start);
    };

    const std::string magic = next_token();
    if (magic != "P2" && magic != "P5") throw ParseError("not a P2/P5 PGM file", lineno);
    img.width = parse_int(next_token(), lineno);
    img.height = parse_int(next_token(), lineno);
    const int maxval = parse_int(next_token(), lineno);
    if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 255)
        throw ParseError("bad PGM dimensions or maxval", lineno);
    if (!have_range) {
        img.vmin = 0.0;
        img.vmax = 1.0;
    }

    const std::size_t count =
        static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    img.values.resize(count);
    const double span = img.vmax - img.vmin;
    if (magic == "P5") {
        ++pos; // single whitespace byte after maxval
        if (text.size() - pos < count) throw ParseError("truncated P5 pixel data", lineno);
        for (std::size_t p = 0; p < count; ++p) {
            const auto gray = static_cast<unsigned char>(text[pos + p]);
            img.values[p] = img.vmin + span * (static_cast<double>(gray) / maxval);
        }
    } else {
        for (std::size_t p = 0; p < count; ++p) {
            const int gray = parse_int(next_token(), lineno);
            if (gray < 0 || gray > maxval) throw ParseError("pixel out of range", lineno);
            img.values[p] = img.vmin + span * (static_cast<double>(gray) / maxval);
        }
    }
    return img;
}

namespace {

json model_to_json(const SvmModel& model) {
    json j;
    j["C"] = model.C;
    j["kernel"] = kernel_name(model.spec.family);
    j["bias"] = model.bias;
    j["bias_from_midpoint"] = model.bias_from_midpoint;
    json support = json::array();
    for (std::size_t i = 0; i < model.support.size(); ++i)
        support.push_back({{"x", model.support.coord(i, 0)},
                           {"y", model.support.coord(i, 1)},
                           {"z", model.z[i]},
                           {"beta", model.beta(static_cast<Eigen::Index>(i))}});
    j["support"] = std::move(support);
    return j;
}

SvmModel model_from_json(const json& j) {
    SvmModel model;
    model.C = j.at("C").get<double>();
    model.spec.family = kernel_from_name(j.at("kernel").get<std::string>());
    model.bias = j.at("bias").get<double>();
    model.bias_from_midpoint = j.value("bias_from_midpoint", false);
    const auto& support = j.at("support");
    NodeSet::Storage pts(static_cast<Eigen::Index>(support.size()), 2);
    model.beta.resize(static_cast<Eigen::Index>(support.size()));
    model.z.resize(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
        pts(static_cast<Eigen::Index>(i), 0) = support[i].at("x").get<double>();
        pts(static_cast<Eigen::Index>(i), 1) = support[i].at("y").get<double>();
        model.z[i] = support[i].at("z").get<int>();
        model.beta(static_cast<Eigen::Index>(i)) = support[i].at("beta").get<double>();
    }
    model.support = NodeSet(std::move(pts));
    return model;
}

json parse_json_file(const std::string& path) {
    const std::string text = slurp(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t line =
            1 + static_cast<std::size_t>(
                    std::count(text.begin(),
                               text.begin() + static_cast<std::ptrdiff_t>(
                                                  std::min<std::size_t>(e.byte, text.size())),
                               '\n'));
        throw ParseError(std::string("bad JSON: ") + e.what(), line);
    }
}

} // namespace

void save_svm_model(const std::string& path, const SvmModel& model) {
    atomic_write(path, model_to_json(model).dump(2) + "\n");
}

SvmModel load_svm_model(const std::string& path) {
    try {
        return model_from_json(parse_json_file(path));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad model JSON: ") + e.what(), 1);
    }
}

void save_svm_ensemble(const std::string& path, const MulticlassSvm& ensemble) {
    json j;
    j["classes"] = ensemble.classes;
    json models = json::array();
    for (const auto& m : ensemble.models) models.push_back(model_to_json(m));
    j["models"] = std::move(models);
    atomic_write(path, j.dump(2) + "\n");
}

MulticlassSvm load_svm_ensemble(const std::string& path) {
    try {
        const json j = parse_json_file(path);
        MulticlassSvm ensemble;
        ensemble.classes = j.at("classes").get<std::vector<int>>();
        for (const auto& m : j.at("models")) ensemble.models.push_back(model_from_json(m));
        if (ensemble.classes.size() != ensemble.models.size())
            throw ParseError("ensemble classes/models length mismatch", 1);
        return ensemble;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad ensemble JSON: ") + e.what(), 1);
    }
}

} // namespace vsdk
