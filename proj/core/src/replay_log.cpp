#include "banditmt/replay_log.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "banditmt/error.hpp"

namespace banditmt {

using nlohmann::json;

std::string LogViolation::describe() const {
    std::string where = row == 0 ? "header" : "row " + std::to_string(row);
    if (line != 0) {
        where += " (line " + std::to_string(line) + ")";
    }
    return where + ": " + message;
}

namespace {

std::string summarize(const std::vector<LogViolation> &violations) {
    std::ostringstream out;
    out << violations.size() << " replay log violation(s)";
    const std::size_t shown = std::min<std::size_t>(violations.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
        out << "\n  " << violations[i].describe();
    }
    if (shown < violations.size()) {
        out << "\n  ...";
    }
    return out.str();
}

} // namespace

namespace {

std::vector<LogViolation> numbered_violations(const ReplayHeader &header, const std::vector<ReplayRow> &rows,
                                              const std::vector<std::size_t> &row_numbers,
                                              const std::vector<std::size_t> &row_lines) {
    std::vector<LogViolation> out;
    if (header.arms.empty()) {
        out.push_back({0, 0, "header declares no arms"});
    }
    std::map<std::string, std::size_t> arm_names;
    for (const auto &name : header.arms) {
        if (!arm_names.emplace(name, arm_names.size()).second) {
            out.push_back({0, 0, "duplicate arm name '" + name + "'"});
        }
    }
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &row = rows[i];
        const std::size_t n = row_numbers[i];
        const std::size_t first = out.size();
        if (row.sentence_id.empty()) {
            out.push_back({n, 0, "empty sentence_id"});
        } else if (auto [it, fresh] = seen.emplace(row.sentence_id, n); !fresh) {
            out.push_back({n, 0,
                           "duplicate sentence_id '" + row.sentence_id + "' (rows " + std::to_string(it->second) +
                               " and " + std::to_string(n) + ")"});
        }
        if (header.dim == 0 && row.context) {
            out.push_back({n, 0, "context present but header declares dim 0"});
        } else if (header.dim > 0 && !row.context) {
            out.push_back({n, 0, "missing context (header declares dim " + std::to_string(header.dim) + ")"});
        } else if (row.context && row.context->dim() != header.dim) {
            out.push_back({n, 0,
                           "context has length " + std::to_string(row.context->dim()) + ", expected " +
                               std::to_string(header.dim)});
        }
        if (row.scores.size() != header.arms.size()) {
            out.push_back({n, 0,
                           "has " + std::to_string(row.scores.size()) + " score entries, expected " +
                               std::to_string(header.arms.size())});
        }
        for (std::size_t a = 0; a < row.scores.size(); ++a) {
            try {
                row.scores[a].validate();
            } catch (const DataError &e) {
                const std::string arm = a < header.arms.size() ? header.arms[a] : std::to_string(a);
                out.push_back({n, 0, "scores for arm '" + arm + "': " + e.what()});
            }
        }
        if (!row.hypotheses.empty() && row.hypotheses.size() != header.arms.size()) {
            out.push_back({n, 0, "hypotheses length does not match arm count"});
        }
        for (std::size_t k = first; k < out.size(); ++k) {
            out[k].line = row_lines[i];
        }
    }
    return out;
}

} // namespace

std::vector<LogViolation> find_violations(const ReplayHeader &header, const std::vector<ReplayRow> &rows) {
    std::vector<std::size_t> numbers(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        numbers[i] = i + 1;
    }
    return numbered_violations(header, rows, numbers, std::vector<std::size_t>(rows.size(), 0));
}

ReplayDataset::ReplayDataset(ReplayHeader header, std::vector<ReplayRow> rows)
    : header_(std::move(header)), rows_(std::move(rows)) {
    const auto violations = find_violations(header_, rows_);
    if (!violations.empty()) {
        throw DataError(summarize(violations));
    }
}

bool ReplayDataset::has_texts() const noexcept {
    for (const auto &row : rows_) {
        if (!row.reference || row.hypotheses.size() != num_arms()) {
            return false;
        }
        for (const auto &h : row.hypotheses) {
            if (!h) {
                return false;
            }
        }
    }
    return !rows_.empty();
}

ArmId ReplayDataset::arm_index(const std::string &name) const {
    for (std::size_t a = 0; a < header_.arms.size(); ++a) {
        if (header_.arms[a] == name) {
            return ArmId(a);
        }
    }
    throw DataError("unknown arm '" + name + "'");
}

void ReplayDataset::require_mode(RewardMode mode) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (std::size_t a = 0; a < num_arms(); ++a) {
            const auto &s = rows_[i].scores[a];
            const bool ok = mode == RewardMode::reference_based ? (s.bleu && s.comet) : s.cometkiwi.has_value();
            if (!ok) {
                throw DataError("row " + std::to_string(i + 1) + ", arm '" + header_.arms[a] + "': " +
                                (mode == RewardMode::reference_based ? "reference_based mode needs bleu and comet"
                                                                     : "target_free mode needs cometkiwi"));
            }
        }
    }
}

namespace {

struct ParsedRow {
    std::optional<ReplayRow> row;
    std::vector<std::string> problems;
};

std::optional<double> optional_number(const json &obj, const char *key, std::vector<std::string> &problems,
                                      const std::string &where) {
    if (!obj.contains(key) || obj.at(key).is_null()) {
        return std::nullopt;
    }
    const auto &v = obj.at(key);
    if (!v.is_number()) {
        problems.push_back(where + "." + key + " is not a number");
        return std::nullopt;
    }
    return v.get<double>();
}

ParsedRow parse_row(const json &j, const ReplayHeader &header) {
    ParsedRow parsed;
    auto &problems = parsed.problems;
    if (!j.is_object()) {
        problems.push_back("record is not a JSON object");
        return parsed;
    }
    ReplayRow row;
    if (!j.contains("sentence_id") || !j.at("sentence_id").is_string()) {
        problems.push_back("sentence_id missing or not a string");
    } else {
        row.sentence_id = j.at("sentence_id").get<std::string>();
    }

    if (j.contains("context") && !j.at("context").is_null()) {
        const auto &c = j.at("context");
        if (!c.is_array()) {
            problems.push_back("context is not an array");
        } else {
            std::vector<double> values;
            values.reserve(c.size());
            bool numeric = true;
            for (const auto &v : c) {
                if (!v.is_number() || !std::isfinite(v.get<double>())) {
                    numeric = false;
                    break;
                }
                values.push_back(v.get<double>());
            }
            if (!numeric) {
                problems.push_back("context contains a non-finite or non-numeric entry");
            } else {
                row.context = ContextVector(std::move(values));
            }
        }
    }

    row.scores.resize(header.arms.size());
    std::vector<bool> have(header.arms.size(), false);
    if (!j.contains("scores") || !j.at("scores").is_object()) {
        problems.push_back("scores missing or not an object");
    } else {
        for (const auto &[name, entry] : j.at("scores").items()) {
            std::size_t a = header.arms.size();
            for (std::size_t k = 0; k < header.arms.size(); ++k) {
                if (header.arms[k] == name) {
                    a = k;
                    break;
                }
            }
            if (a == header.arms.size()) {
                problems.push_back("scores names unknown arm '" + name + "'");
                continue;
            }
            if (!entry.is_object()) {
                problems.push_back("scores." + name + " is not an object");
                continue;
            }
            const std::string where = "scores." + name;
            MetricScores s;
            s.bleu = optional_number(entry, "bleu", problems, where);
            s.comet = optional_number(entry, "comet", problems, where);
            s.cometkiwi = optional_number(entry, "cometkiwi", problems, where);
            row.scores[a] = s;
            have[a] = true;
        }
        for (std::size_t a = 0; a < have.size(); ++a) {
            if (!have[a]) {
                problems.push_back("scores missing arm '" + header.arms[a] + "'");
            }
        }
    }

    auto text_field = [&](const char *key) -> std::optional<std::string> {
        if (!j.contains(key) || j.at(key).is_null()) {
            return std::nullopt;
        }
        if (!j.at(key).is_string()) {
            problems.push_back(std::string(key) + " is not a string");
            return std::nullopt;
        }
        return j.at(key).get<std::string>();
    };
    row.source = text_field("source");
    row.reference = text_field("reference");
    if (j.contains("hypotheses") && !j.at("hypotheses").is_null()) {
        const auto &h = j.at("hypotheses");
        if (!h.is_object()) {
            problems.push_back("hypotheses is not an object");
        } else {
            row.hypotheses.resize(header.arms.size());
            for (const auto &[name, text] : h.items()) {
                std::size_t a = header.arms.size();
                for (std::size_t k = 0; k < header.arms.size(); ++k) {
                    if (header.arms[k] == name) {
                        a = k;
                        break;
                    }
                }
                if (a == header.arms.size()) {
                    problems.push_back("hypotheses names unknown arm '" + name + "'");
                } else if (!text.is_string()) {
                    problems.push_back("hypotheses." + name + " is not a string");
                } else {
                    row.hypotheses[a] = text.get<std::string>();
                }
            }
        }
    }
    if (problems.empty()) {
        parsed.row = std::move(row);
    }
    return parsed;
}

std::optional<ReplayHeader> parse_header(const json &j, std::vector<std::string> &problems) {
    if (!j.is_object() || !j.contains("arms")) {
        problems.push_back("first record must be a header object with an 'arms' list");
        return std::nullopt;
    }
    ReplayHeader h;
    const auto &arms = j.at("arms");
    if (!arms.is_array()) {
        problems.push_back("arms is not an array");
        return std::nullopt;
    }
    for (const auto &a : arms) {
        if (!a.is_string()) {
            problems.push_back("arms entries must be strings");
            return std::nullopt;
        }
        h.arms.push_back(a.get<std::string>());
    }
    if (j.contains("dim")) {
        if (!(j.at("dim").is_number_integer() && j.at("dim") >= 0)) {
            problems.push_back("dim must be a nonnegative integer");
            return std::nullopt;
        }
        h.dim = j.at("dim").get<std::size_t>();
    }
    for (const char *key : {"language_pair", "domain"}) {
        if (j.contains(key)) {
            if (!j.at(key).is_string()) {
                problems.push_back(std::string(key) + " must be a string");
                return std::nullopt;
            }
            (key[0] == 'l' ? h.language_pair : h.domain) = j.at(key).get<std::string>();
        }
    }
    for (const auto &[key, value] : j.items()) {
        if (key != "arms" && key != "dim" && key != "language_pair" && key != "domain") {
            h.extra[key] = value;
        }
    }
    return h;
}

bool blank(const std::string &line) {
    return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

} // namespace

LogCheckResult check_replay_log(std::istream &in) {
    LogCheckResult result;
    std::string line;
    std::size_t line_no = 0;
    std::optional<ReplayHeader> header;
    std::vector<ReplayRow> rows;
    std::vector<std::size_t> row_lines;
    std::vector<std::size_t> row_numbers;
    bool header_seen = false;
    std::size_t row_no = 0;
    bool rows_complete = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error &e) {
            if (!header_seen) {
                header_seen = true;
                result.violations.push_back({0, line_no, std::string("header is not valid JSON: ") + e.what()});
            } else {
                ++row_no;
                rows_complete = false;
                result.violations.push_back({row_no, line_no, std::string("not valid JSON: ") + e.what()});
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            std::vector<std::string> problems;
            header = parse_header(j, problems);
            for (auto &p : problems) {
                result.violations.push_back({0, line_no, std::move(p)});
            }
            continue;
        }
        ++row_no;
        if (!header) {
            continue; // no usable header: nothing to check rows against
        }
        auto parsed = parse_row(j, *header);
        for (auto &p : parsed.problems) {
            result.violations.push_back({row_no, line_no, std::move(p)});
        }
        if (parsed.row) {
            rows.push_back(std::move(*parsed.row));
            row_lines.push_back(line_no);
            row_numbers.push_back(row_no);
        } else {
            rows_complete = false;
        }
    }
    if (!header_seen) {
        result.violations.push_back({0, 0, "empty log: no header record"});
        return result;
    }
    if (!header) {
        return result;
    }
    for (auto &v : numbered_violations(*header, rows, row_numbers, row_lines)) {
        result.violations.push_back(std::move(v));
    }
    std::stable_sort(result.violations.begin(), result.violations.end(),
                     [](const LogViolation &a, const LogViolation &b) { return a.row < b.row; });
    if (result.violations.empty() && rows_complete) {
        result.dataset.emplace(std::move(*header), std::move(rows));
    }
    return result;
}

LogCheckResult check_replay_log_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        LogCheckResult result;
        result.violations.push_back({0, 0, "cannot open '" + path.string() + "'"});
        return result;
    }
    return check_replay_log(in);
}

ReplayDataset read_replay_log(const std::filesystem::path &path) {
    auto result = check_replay_log_file(path);
    if (!result.ok()) {
        throw DataError(path.string() + ": " + summarize(result.violations));
    }
    return std::move(*result.dataset);
}

void write_replay_log(std::ostream &out, const ReplayDataset &dataset) {
    const auto &h = dataset.header();
    json header = h.extra.is_object() ? h.extra : json::object();
    header["arms"] = h.arms;
    header["dim"] = h.dim;
    header["language_pair"] = h.language_pair;
    header["domain"] = h.domain;
    out << header.dump() << '\n';
    for (const auto &row : dataset.rows()) {
        json j;
        j["sentence_id"] = row.sentence_id;
        if (row.context) {
            j["context"] = row.context->values();
        }
        json scores = json::object();
        for (std::size_t a = 0; a < h.arms.size(); ++a) {
            json entry = json::object();
            const auto &s = row.scores[a];
            if (s.bleu) entry["bleu"] = *s.bleu;
            if (s.comet) entry["comet"] = *s.comet;
            if (s.cometkiwi) entry["cometkiwi"] = *s.cometkiwi;
            scores[h.arms[a]] = entry;
        }
        j["scores"] = scores;
        if (row.source) j["source"] = *row.source;
        if (row.reference) j["reference"] = *row.reference;
        if (!row.hypotheses.empty()) {
            json hyps = json::object();
            for (std::size_t a = 0; a < h.arms.size(); ++a) {
                if (row.hypotheses[a]) hyps[h.arms[a]] = *row.hypotheses[a];
            }
            j["hypotheses"] = hyps;
        }
        out << j.dump() << '\n';
    }
}

} // namespace banditmt
