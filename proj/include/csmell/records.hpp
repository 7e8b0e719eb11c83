#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csmell/time.hpp"

namespace csmell {

using DevId = std::int32_t;
constexpr DevId kUnresolved = -1;

enum class Mood : int { indicative = 0, imperative = 1, conditional = 2, subjunctive = 3 };

inline const char* mood_name(Mood m) {
    switch (m) {
        case Mood::indicative: return "indicative";
        case Mood::imperative: return "imperative";
        case Mood::conditional: return "conditional";
        case Mood::subjunctive: return "subjunctive";
    }
    return "?";
}

struct CommitRecord {
    std::string commit_id;
    std::string author_name;
    std::string author_email; // lowercased at parse time
    Instant timestamp = 0;    // UTC
    int tz_offset_minutes = 0; // recorded local zone, for the sponsored rule
    std::vector<std::string> files;
    DevId developer = kUnresolved;
};

struct MessageRecord {
    std::string message_id;
    std::optional<std::string> in_reply_to;
    std::string sender_name;
    std::string sender_email; // lowercased
    Instant timestamp = 0;
    std::optional<std::string> thread_id;
    DevId developer = kUnresolved;
};

struct SentenceRecord {
    std::string project;
    std::string developer_key; // email or free-form name
    Instant timestamp = 0;
    double valence = 0, arousal = 0, dominance = 0;
    int sad = 0, anger = 0, love = 0, joy = 0;
    double sentiment_strength = 0; // in [-1, 1]
    int polite = 0;
    Mood mood = Mood::indicative;
    double modality = 0; // in [-1, 1]
    DevId developer = kUnresolved;
};

struct DeveloperIdentity {
    DevId canonical_id = kUnresolved;
    std::set<std::string> emails; // lowercased
    std::set<std::string> names;  // normalized
    std::string project;
};

struct Corpus {
    std::string project;
    std::vector<CommitRecord> commits;     // sorted by timestamp
    std::vector<MessageRecord> messages;   // sorted by timestamp
    std::vector<SentenceRecord> sentences; // sorted by timestamp
    std::vector<DeveloperIdentity> identities;
    std::vector<std::string> warnings;

    const DeveloperIdentity* identity(DevId id) const {
        if (id < 0 || static_cast<std::size_t>(id) >= identities.size()) return nullptr;
        return &identities[static_cast<std::size_t>(id)];
    }
};

inline std::string lower_ascii(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// trim + collapse internal whitespace + casefold; the whole normalization
// applied to names before identity matching.
inline std::string normalize_name(const std::string& raw) {
    std::string out;
    bool pending_space = false;
    for (const char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

} // namespace csmell
