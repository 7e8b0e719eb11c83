#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "csmell/csv.hpp"
#include "csmell/records.hpp"
#include "csmell/time.hpp"

// Parsers for the three input formats plus identity resolution. Commit logs
// are pre-exported JSON-Lines (one object per commit); mail is RFC-4155 mbox
// or a JSON-Lines equivalent; sentences are CSV or JSON-Lines.

namespace csmell {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
          line_number(line) {}
    std::size_t line_number;
};

namespace detail {

inline bool is_blank(const std::string& s) {
    for (const char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (const char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(std::move(cur));
    return lines;
}

// First "<token>" in a header value, angle brackets stripped.
inline std::optional<std::string> first_angle_token(const std::string& value) {
    const std::size_t lt = value.find('<');
    if (lt == std::string::npos) return std::nullopt;
    const std::size_t gt = value.find('>', lt + 1);
    if (gt == std::string::npos) return std::nullopt;
    if (gt == lt + 1) return std::nullopt;
    return value.substr(lt + 1, gt - lt - 1);
}

struct Sender {
    std::string name;
    std::string email;
};

// "Ann Author <ann@x.org>", "ann@x.org (Ann Author)", or bare address.
inline std::optional<Sender> parse_from_header(const std::string& value) {
    Sender out;
    const std::size_t lt = value.find('<');
    if (lt != std::string::npos) {
        const std::size_t gt = value.find('>', lt + 1);
        if (gt == std::string::npos) return std::nullopt;
        out.email = lower_ascii(value.substr(lt + 1, gt - lt - 1));
        std::string name = value.substr(0, lt);
        while (!name.empty() && (std::isspace(static_cast<unsigned char>(name.back())) ||
                                 name.back() == '"'))
            name.pop_back();
        std::size_t start = 0;
        while (start < name.size() && (std::isspace(static_cast<unsigned char>(name[start])) ||
                                       name[start] == '"'))
            ++start;
        out.name = name.substr(start);
    } else {
        const std::size_t par = value.find('(');
        std::string addr = (par == std::string::npos) ? value : value.substr(0, par);
        std::size_t b = 0, e = addr.size();
        while (b < e && std::isspace(static_cast<unsigned char>(addr[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(addr[e - 1]))) --e;
        addr = addr.substr(b, e - b);
        if (par != std::string::npos) {
            const std::size_t close = value.find(')', par + 1);
            if (close != std::string::npos) out.name = value.substr(par + 1, close - par - 1);
        }
        out.email = lower_ascii(addr);
    }
    if (out.email.find('@') == std::string::npos) return std::nullopt;
    return out;
}

inline std::string json_get_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw std::runtime_error(std::string("missing or non-string field \"") + key + "\"");
    return j[key].get<std::string>();
}

} // namespace detail

struct CommitParseResult {
    std::vector<CommitRecord> records;
    std::vector<std::string> warnings;
};

inline CommitParseResult parse_commit_log(const std::string& path) {
    CommitParseResult out;
    const std::string text = read_file(path);
    const auto lines = detail::split_lines(text);
    std::size_t lineno = 0;
    for (const auto& line : lines) {
        ++lineno;
        if (detail::is_blank(line)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw ParseError(path, lineno, std::string("bad JSON: ") + e.what());
        }
        CommitRecord rec;
        try {
            rec.commit_id = detail::json_get_string(j, "id");
            rec.author_name = detail::json_get_string(j, "name");
            rec.author_email = lower_ascii(detail::json_get_string(j, "email"));
            const auto ts = parse_iso8601(detail::json_get_string(j, "ts"));
            if (!ts) throw std::runtime_error("unparseable timestamp");
            rec.timestamp = *ts;
            if (j.contains("tz_offset_minutes")) rec.tz_offset_minutes = j["tz_offset_minutes"].get<int>();
            if (!j.contains("files") || !j["files"].is_array())
                throw std::runtime_error("missing files array");
            for (const auto& f : j["files"]) rec.files.push_back(f.get<std::string>());
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(path, lineno, e.what());
        }
        if (rec.files.empty()) throw ParseError(path, lineno, "commit with empty file list");
        if (rec.author_email.empty()) throw ParseError(path, lineno, "commit with empty author email");
        out.records.push_back(std::move(rec));
    }
    if (out.records.empty())
        out.warnings.push_back(path + ": commit log contained no commits");
    return out;
}

struct MailParseResult {
    std::vector<MessageRecord> records;
    std::vector<std::string> warnings;
};

namespace detail {

inline MailParseResult parse_mail_jsonl(const std::string& path, const std::string& text) {
    MailParseResult out;
    std::size_t lineno = 0;
    for (const auto& line : split_lines(text)) {
        ++lineno;
        if (is_blank(line)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw ParseError(path, lineno, std::string("bad JSON: ") + e.what());
        }
        MessageRecord rec;
        try {
            rec.message_id = json_get_string(j, "message_id");
            rec.sender_name = json_get_string(j, "name");
            rec.sender_email = lower_ascii(json_get_string(j, "email"));
            const auto ts = parse_iso8601(json_get_string(j, "ts"));
            if (!ts) throw std::runtime_error("unparseable timestamp");
            rec.timestamp = *ts;
            if (j.contains("in_reply_to") && j["in_reply_to"].is_string())
                rec.in_reply_to = j["in_reply_to"].get<std::string>();
            if (j.contains("thread_id") && j["thread_id"].is_string())
                rec.thread_id = j["thread_id"].get<std::string>();
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(path, lineno, e.what());
        }
        if (rec.in_reply_to && *rec.in_reply_to == rec.message_id) rec.in_reply_to.reset();
        out.records.push_back(std::move(rec));
    }
    return out;
}

inline MailParseResult parse_mail_mbox(const std::string& path, const std::string& text) {
    MailParseResult out;
    const auto lines = split_lines(text);

    struct RawMessage {
        std::map<std::string, std::string> headers; // lowercased names, unfolded values
        std::size_t start_line = 0;
    };
    std::vector<RawMessage> raw;
    bool prev_blank = true;
    bool in_headers = false;
    std::string last_header;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (prev_blank && line.rfind("From ", 0) == 0) {
            raw.push_back(RawMessage{{}, i + 1});
            in_headers = true;
            last_header.clear();
            prev_blank = false;
            continue;
        }
        if (in_headers && !raw.empty()) {
            if (is_blank(line)) {
                in_headers = false;
            } else if ((line[0] == ' ' || line[0] == '\t') && !last_header.empty()) {
                raw.back().headers[last_header] += " " + line.substr(
                    line.find_first_not_of(" \t"));
            } else {
                const std::size_t colon = line.find(':');
                if (colon != std::string::npos) {
                    std::string name = lower_ascii(line.substr(0, colon));
                    std::string value = line.substr(colon + 1);
                    if (!value.empty() && value.front() == ' ') value.erase(0, 1);
                    // first occurrence wins
                    raw.back().headers.emplace(std::move(name), std::move(value));
                    last_header = lower_ascii(line.substr(0, colon));
                }
            }
        }
        prev_blank = is_blank(line);
    }

    std::size_t synth = 0;
    for (const auto& msg : raw) {
        MessageRecord rec;
        const auto find = [&](const char* k) -> const std::string* {
            const auto it = msg.headers.find(k);
            return it == msg.headers.end() ? nullptr : &it->second;
        };
        const std::string* date = find("date");
        std::optional<Instant> ts;
        if (date) ts = parse_rfc2822(*date);
        if (!ts) {
            out.warnings.push_back(path + ": message at line " + std::to_string(msg.start_line) +
                                   " dropped (missing or unparseable Date)");
            continue;
        }
        rec.timestamp = *ts;
        const std::string* from = find("from");
        std::optional<detail::Sender> sender;
        if (from) sender = parse_from_header(*from);
        if (sender) {
            rec.sender_name = sender->name;
            rec.sender_email = sender->email;
        } else {
            rec.sender_name = "unresolved";
            out.warnings.push_back(path + ": message at line " + std::to_string(msg.start_line) +
                                   " has undecodable From header; sender kept as unresolved");
        }
        if (const std::string* mid = find("message-id")) {
            const auto id = first_angle_token(*mid);
            rec.message_id = id ? *id : *mid;
        } else {
            rec.message_id = path + "#" + std::to_string(++synth);
            out.warnings.push_back(path + ": message at line " + std::to_string(msg.start_line) +
                                   " missing Message-ID; synthesized " + rec.message_id);
        }
        if (const std::string* irt = find("in-reply-to")) {
            rec.in_reply_to = first_angle_token(*irt);
        }
        if (!rec.in_reply_to) {
            if (const std::string* refs = find("references"))
                rec.in_reply_to = first_angle_token(*refs);
        }
        if (rec.in_reply_to && *rec.in_reply_to == rec.message_id) rec.in_reply_to.reset();
        out.records.push_back(std::move(rec));
    }
    return out;
}

} // namespace detail

inline MailParseResult parse_mailbox(const std::string& path) {
    const std::string text = read_file(path);
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return detail::parse_mail_jsonl(path, text);
    return detail::parse_mail_mbox(path, text);
}

struct SentenceParseResult {
    std::vector<SentenceRecord> records;
    std::vector<std::string> warnings;
};

namespace detail {

inline const char* const kSentenceColumns[] = {"project", "developer", "ts", "valence",
                                               "arousal", "dominance", "sad", "anger",
                                               "love", "joy", "sentiment", "polite",
                                               "mood", "modality"};

struct SentenceFieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int parse_binary(const std::string& s, const char* field) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw SentenceFieldError(std::string(field) + " must be 0 or 1, got \"" + s + "\"");
}

// from_chars keeps parsing independent of any process locale
inline double parse_real(const std::string& s, const char* field) {
    double v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v))
        throw SentenceFieldError(std::string(field) + " is not a finite real: \"" + s + "\"");
    return v;
}

inline SentenceRecord sentence_from_fields(const std::map<std::string, std::string>& f) {
    SentenceRecord rec;
    const auto get = [&](const char* k) -> const std::string& {
        const auto it = f.find(k);
        if (it == f.end()) throw SentenceFieldError(std::string("missing column ") + k);
        return it->second;
    };
    rec.project = get("project");
    rec.developer_key = get("developer");
    const auto ts = parse_iso8601(get("ts"));
    if (!ts) throw SentenceFieldError("unparseable ts \"" + get("ts") + "\"");
    rec.timestamp = *ts;
    rec.valence = parse_real(get("valence"), "valence");
    rec.arousal = parse_real(get("arousal"), "arousal");
    rec.dominance = parse_real(get("dominance"), "dominance");
    rec.sad = parse_binary(get("sad"), "sad");
    rec.anger = parse_binary(get("anger"), "anger");
    rec.love = parse_binary(get("love"), "love");
    rec.joy = parse_binary(get("joy"), "joy");
    rec.sentiment_strength = parse_real(get("sentiment"), "sentiment");
    if (rec.sentiment_strength < -1.0 || rec.sentiment_strength > 1.0)
        throw SentenceFieldError("sentiment out of [-1,1]: " + get("sentiment"));
    rec.polite = parse_binary(get("polite"), "polite");
    const std::string& mood = get("mood");
    if (mood.size() != 1 || mood[0] < '0' || mood[0] > '3')
        throw SentenceFieldError("unknown mood code \"" + mood + "\"");
    rec.mood = static_cast<Mood>(mood[0] - '0');
    rec.modality = parse_real(get("modality"), "modality");
    if (rec.modality < -1.0 || rec.modality > 1.0)
        throw SentenceFieldError("modality out of [-1,1]: " + get("modality"));
    return rec;
}

} // namespace detail

inline SentenceParseResult parse_sentiment_sentences(const std::string& path) {
    SentenceParseResult out;
    const std::string text = read_file(path);
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    const bool jsonl = (first != std::string::npos && text[first] == '{');

    if (jsonl) {
        std::size_t lineno = 0;
        for (const auto& line : detail::split_lines(text)) {
            ++lineno;
            if (detail::is_blank(line)) continue;
            std::map<std::string, std::string> fields;
            try {
                const auto j = nlohmann::json::parse(line);
                for (const char* col : detail::kSentenceColumns) {
                    if (!j.contains(col)) continue;
                    const auto& v = j[col];
                    if (v.is_string())
                        fields[col] = v.get<std::string>();
                    else
                        fields[col] = v.dump();
                }
                out.records.push_back(detail::sentence_from_fields(fields));
            } catch (const detail::SentenceFieldError& e) {
                out.warnings.push_back(path + ": row " + std::to_string(lineno) +
                                       " rejected: " + e.what());
            } catch (const std::exception& e) {
                out.warnings.push_back(path + ": row " + std::to_string(lineno) +
                                       " rejected: bad JSON: " + e.what());
            }
        }
        return out;
    }

    std::size_t pos = 0;
    std::vector<std::string> header;
    if (!csv_next_record(text, pos, header))
        throw ParseError(path, 1, "empty sentence file (missing header)");
    std::map<std::string, std::size_t> col_index;
    for (std::size_t i = 0; i < header.size(); ++i) col_index[header[i]] = i;
    for (const char* col : detail::kSentenceColumns)
        if (!col_index.count(col))
            throw ParseError(path, 1, std::string("missing column \"") + col + "\"");

    std::vector<std::string> row;
    std::size_t lineno = 1;
    while (csv_next_record(text, pos, row)) {
        ++lineno;
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != header.size()) {
            out.warnings.push_back(path + ": row " + std::to_string(lineno) +
                                   " rejected: expected " + std::to_string(header.size()) +
                                   " fields, got " + std::to_string(row.size()));
            continue;
        }
        std::map<std::string, std::string> fields;
        for (const char* col : detail::kSentenceColumns) fields[col] = row[col_index[col]];
        try {
            out.records.push_back(detail::sentence_from_fields(fields));
        } catch (const detail::SentenceFieldError& e) {
            out.warnings.push_back(path + ": row " + std::to_string(lineno) +
                                   " rejected: " + e.what());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Identity resolution.
//
// Two rules, in order: records sharing an exact lowercased e-mail belong to
// one developer; records not linked that way are merged when their normalized
// names coincide. Records with neither a usable e-mail nor a name land in the
// unresolved bucket. Merging is transitive by construction (union-find over
// e-mail and name keys).

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace detail

inline void resolve_identities(Corpus& corpus) {
    // key space: "e:<email>" and "n:<name>"
    std::map<std::string, std::size_t> key_index;
    const auto intern = [&](const std::string& key) {
        const auto it = key_index.find(key);
        if (it != key_index.end()) return it->second;
        const std::size_t idx = key_index.size();
        key_index.emplace(key, idx);
        return idx;
    };

    struct RecordKeys {
        std::string email; // already lowercased
        std::string name;  // normalized
    };
    const auto keys_of_sentence = [](const SentenceRecord& s) {
        RecordKeys k;
        if (s.developer_key.find('@') != std::string::npos)
            k.email = lower_ascii(s.developer_key);
        else
            k.name = normalize_name(s.developer_key);
        return k;
    };

    std::vector<RecordKeys> all;
    all.reserve(corpus.commits.size() + corpus.messages.size() + corpus.sentences.size());
    for (const auto& c : corpus.commits)
        all.push_back({c.author_email, normalize_name(c.author_name)});
    for (const auto& m : corpus.messages) {
        RecordKeys k{m.sender_email, normalize_name(m.sender_name)};
        if (k.name == "unresolved") k.name.clear(); // placeholder, not a real name
        all.push_back(k);
    }
    for (const auto& s : corpus.sentences) all.push_back(keys_of_sentence(s));

    for (const auto& k : all) {
        if (!k.email.empty()) intern("e:" + k.email);
        if (!k.name.empty()) intern("n:" + k.name);
    }
    detail::UnionFind uf(key_index.size());
    for (const auto& k : all)
        if (!k.email.empty() && !k.name.empty())
            uf.unite(key_index["e:" + k.email], key_index["n:" + k.name]);

    // roots -> provisional identities
    std::map<std::size_t, DeveloperIdentity> groups;
    for (const auto& [key, idx] : key_index) {
        auto& g = groups[uf.find(idx)];
        if (key[0] == 'e')
            g.emails.insert(key.substr(2));
        else
            g.names.insert(key.substr(2));
    }

    // canonical ids: sorted by smallest e-mail, then smallest name
    std::vector<DeveloperIdentity> identities;
    identities.reserve(groups.size());
    for (auto& [root, g] : groups) {
        g.project = corpus.project;
        identities.push_back(std::move(g));
    }
    std::sort(identities.begin(), identities.end(),
              [](const DeveloperIdentity& a, const DeveloperIdentity& b) {
                  const std::string& ka = a.emails.empty() ? *a.names.begin() : *a.emails.begin();
                  const std::string& kb = b.emails.empty() ? *b.names.begin() : *b.emails.begin();
                  if (ka != kb) return ka < kb;
                  return a.emails.empty() < b.emails.empty();
              });
    std::map<std::string, DevId> email_to_id, name_to_id;
    for (std::size_t i = 0; i < identities.size(); ++i) {
        identities[i].canonical_id = static_cast<DevId>(i);
        for (const auto& e : identities[i].emails) email_to_id[e] = static_cast<DevId>(i);
        for (const auto& n : identities[i].names) name_to_id[n] = static_cast<DevId>(i);
    }
    corpus.identities = std::move(identities);

    const auto assign = [&](const RecordKeys& k) -> DevId {
        if (!k.email.empty()) {
            const auto it = email_to_id.find(k.email);
            if (it != email_to_id.end()) return it->second;
        }
        if (!k.name.empty()) {
            const auto it = name_to_id.find(k.name);
            if (it != name_to_id.end()) return it->second;
        }
        return kUnresolved;
    };

    std::size_t unresolved = 0;
    std::size_t cursor = 0;
    for (auto& c : corpus.commits) c.developer = assign(all[cursor++]);
    for (auto& m : corpus.messages) m.developer = assign(all[cursor++]);
    for (auto& s : corpus.sentences) s.developer = assign(all[cursor++]);
    for (const auto& c : corpus.commits) unresolved += (c.developer == kUnresolved);
    for (const auto& m : corpus.messages) unresolved += (m.developer == kUnresolved);
    for (const auto& s : corpus.sentences) unresolved += (s.developer == kUnresolved);
    const std::size_t total =
        corpus.commits.size() + corpus.messages.size() + corpus.sentences.size();
    if (unresolved > 0) {
        std::ostringstream msg;
        msg << "identity resolution: " << unresolved << " of " << total
            << " records unresolved ("
            << fmt_double(total ? 100.0 * static_cast<double>(unresolved) /
                                      static_cast<double>(total)
                                : 0.0, 4)
            << "%)";
        corpus.warnings.push_back(msg.str());
    }
}

inline void sort_corpus_records(Corpus& corpus) {
    std::stable_sort(corpus.commits.begin(), corpus.commits.end(),
                     [](const CommitRecord& a, const CommitRecord& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.commit_id < b.commit_id;
                     });
    std::stable_sort(corpus.messages.begin(), corpus.messages.end(),
                     [](const MessageRecord& a, const MessageRecord& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.message_id < b.message_id;
                     });
    std::stable_sort(corpus.sentences.begin(), corpus.sentences.end(),
                     [](const SentenceRecord& a, const SentenceRecord& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.developer_key < b.developer_key;
                     });
}

// Full ingestion for one project. Sentences whose project column names a
// different project are skipped (sentence files may be shared).
inline Corpus load_corpus(const std::string& project, const std::string& commit_path,
                          const std::string& mail_path, const std::string& sentences_path) {
    Corpus corpus;
    corpus.project = project;

    auto commits = parse_commit_log(commit_path);
    corpus.commits = std::move(commits.records);
    corpus.warnings.insert(corpus.warnings.end(), commits.warnings.begin(),
                           commits.warnings.end());

    auto mail = parse_mailbox(mail_path);
    corpus.messages = std::move(mail.records);
    corpus.warnings.insert(corpus.warnings.end(), mail.warnings.begin(), mail.warnings.end());

    auto sentences = parse_sentiment_sentences(sentences_path);
    std::size_t skipped = 0;
    for (auto& s : sentences.records) {
        if (s.project == project)
            corpus.sentences.push_back(std::move(s));
        else
            ++skipped;
    }
    if (skipped > 0)
        corpus.warnings.push_back(sentences_path + ": " + std::to_string(skipped) +
                                  " sentence rows for other projects skipped");
    corpus.warnings.insert(corpus.warnings.end(), sentences.warnings.begin(),
                           sentences.warnings.end());

    sort_corpus_records(corpus);

    // message ids must be unique within the corpus; keep the earliest
    std::set<std::string> seen_ids;
    std::vector<MessageRecord> unique_messages;
    unique_messages.reserve(corpus.messages.size());
    for (auto& m : corpus.messages) {
        if (seen_ids.insert(m.message_id).second) {
            unique_messages.push_back(std::move(m));
        } else {
            corpus.warnings.push_back("duplicate message id dropped: " + m.message_id);
        }
    }
    corpus.messages = std::move(unique_messages);

    resolve_identities(corpus);
    return corpus;
}

// ---------------------------------------------------------------------------
// Corpus artifact (JSON). nlohmann keeps object keys sorted, so re-serializing
// an identical corpus is byte-identical.

inline nlohmann::json corpus_to_json(const Corpus& c) {
    nlohmann::json j;
    j["project"] = c.project;
    auto& commits = j["commits"] = nlohmann::json::array();
    for (const auto& r : c.commits) {
        commits.push_back({{"id", r.commit_id},
                           {"name", r.author_name},
                           {"email", r.author_email},
                           {"ts", format_utc(r.timestamp)},
                           {"tz_offset_minutes", r.tz_offset_minutes},
                           {"files", r.files},
                           {"dev", r.developer}});
    }
    auto& messages = j["messages"] = nlohmann::json::array();
    for (const auto& r : c.messages) {
        nlohmann::json m = {{"message_id", r.message_id},
                            {"name", r.sender_name},
                            {"email", r.sender_email},
                            {"ts", format_utc(r.timestamp)},
                            {"dev", r.developer}};
        if (r.in_reply_to) m["in_reply_to"] = *r.in_reply_to;
        if (r.thread_id) m["thread_id"] = *r.thread_id;
        messages.push_back(std::move(m));
    }
    auto& sentences = j["sentences"] = nlohmann::json::array();
    for (const auto& r : c.sentences) {
        sentences.push_back({{"project", r.project},
                             {"developer", r.developer_key},
                             {"ts", format_utc(r.timestamp)},
                             {"valence", r.valence},
                             {"arousal", r.arousal},
                             {"dominance", r.dominance},
                             {"sad", r.sad},
                             {"anger", r.anger},
                             {"love", r.love},
                             {"joy", r.joy},
                             {"sentiment", r.sentiment_strength},
                             {"polite", r.polite},
                             {"mood", static_cast<int>(r.mood)},
                             {"modality", r.modality},
                             {"dev", r.developer}});
    }
    auto& ids = j["identities"] = nlohmann::json::array();
    for (const auto& d : c.identities) {
        ids.push_back({{"id", d.canonical_id},
                       {"emails", std::vector<std::string>(d.emails.begin(), d.emails.end())},
                       {"names", std::vector<std::string>(d.names.begin(), d.names.end())}});
    }
    j["warnings"] = c.warnings;
    return j;
}

inline Corpus corpus_from_json(const nlohmann::json& j) {
    Corpus c;
    c.project = j.at("project").get<std::string>();
    for (const auto& m : j.at("commits")) {
        CommitRecord r;
        r.commit_id = m.at("id").get<std::string>();
        r.author_name = m.at("name").get<std::string>();
        r.author_email = m.at("email").get<std::string>();
        r.timestamp = *parse_iso8601(m.at("ts").get<std::string>());
        r.tz_offset_minutes = m.at("tz_offset_minutes").get<int>();
        r.files = m.at("files").get<std::vector<std::string>>();
        r.developer = m.at("dev").get<DevId>();
        c.commits.push_back(std::move(r));
    }
    for (const auto& m : j.at("messages")) {
        MessageRecord r;
        r.message_id = m.at("message_id").get<std::string>();
        r.sender_name = m.at("name").get<std::string>();
        r.sender_email = m.at("email").get<std::string>();
        r.timestamp = *parse_iso8601(m.at("ts").get<std::string>());
        if (m.contains("in_reply_to")) r.in_reply_to = m["in_reply_to"].get<std::string>();
        if (m.contains("thread_id")) r.thread_id = m["thread_id"].get<std::string>();
        r.developer = m.at("dev").get<DevId>();
        c.messages.push_back(std::move(r));
    }
    for (const auto& m : j.at("sentences")) {
        SentenceRecord r;
        r.project = m.at("project").get<std::string>();
        r.developer_key = m.at("developer").get<std::string>();
        r.timestamp = *parse_iso8601(m.at("ts").get<std::string>());
        r.valence = m.at("valence").get<double>();
        r.arousal = m.at("arousal").get<double>();
        r.dominance = m.at("dominance").get<double>();
        r.sad = m.at("sad").get<int>();
        r.anger = m.at("anger").get<int>();
        r.love = m.at("love").get<int>();
        r.joy = m.at("joy").get<int>();
        r.sentiment_strength = m.at("sentiment").get<double>();
        r.polite = m.at("polite").get<int>();
        r.mood = static_cast<Mood>(m.at("mood").get<int>());
        r.modality = m.at("modality").get<double>();
        r.developer = m.at("dev").get<DevId>();
        c.sentences.push_back(std::move(r));
    }
    for (const auto& m : j.at("identities")) {
        DeveloperIdentity d;
        d.canonical_id = m.at("id").get<DevId>();
        for (const auto& e : m.at("emails")) d.emails.insert(e.get<std::string>());
        for (const auto& n : m.at("names")) d.names.insert(n.get<std::string>());
        d.project = c.project;
        c.identities.push_back(std::move(d));
    }
    c.warnings = j.at("warnings").get<std::vector<std::string>>();
    return c;
}

} // namespace csmell
