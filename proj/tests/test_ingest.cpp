#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "csmell/ingest.hpp"
#include "test_support.hpp"

using namespace csmell;
using testsupport::TempDir;
using testsupport::write;

TEST_CASE("commit log: emails lowercased and timestamps normalized") {
    TempDir tmp("commits");
    const auto path = write(
        tmp.file("c.jsonl"),
        R"({"id":"a1","name":"Ann","email":"A@X.org","ts":"2010-01-01T00:00:00Z","files":["src/a.c"]})"
        "\n");
    const auto result = parse_commit_log(path);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].author_email == "a@x.org");
    CHECK(result.records[0].timestamp == *parse_iso8601("2010-01-01T00:00:00Z"));
    CHECK(result.records[0].files == std::vector<std::string>{"src/a.c"});
}

TEST_CASE("commit log: zone offsets convert to UTC") {
    TempDir tmp("commits");
    const auto path = write(
        tmp.file("c.jsonl"),
        R"({"id":"a1","name":"Ann","email":"a@x.org","ts":"2010-06-01T12:00:00+02:00","tz_offset_minutes":120,"files":["f"]})"
        "\n");
    const auto result = parse_commit_log(path);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].timestamp == *parse_iso8601("2010-06-01T10:00:00Z"));
    CHECK(result.records[0].tz_offset_minutes == 120);
}

TEST_CASE("commit log: empty file yields empty list with a warning") {
    TempDir tmp("commits");
    const auto result = parse_commit_log(write(tmp.file("empty.jsonl"), ""));
    CHECK(result.records.empty());
    CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("commit log: malformed line reports its line number") {
    TempDir tmp("commits");
    const auto path = write(
        tmp.file("c.jsonl"),
        R"({"id":"a1","name":"A","email":"a@x","ts":"2010-01-01T00:00:00Z","files":["f"]})"
        "\nnot json\n");
    try {
        parse_commit_log(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 2);
    }
}

TEST_CASE("commit log: empty file list rejected") {
    TempDir tmp("commits");
    const auto path = write(
        tmp.file("c.jsonl"),
        R"({"id":"a1","name":"A","email":"a@x","ts":"2010-01-01T00:00:00Z","files":[]})" "\n");
    CHECK_THROWS_AS(parse_commit_log(path), ParseError);
}

TEST_CASE("corpus sort restores out-of-order commit timestamps") {
    TempDir tmp("commits");
    const auto path = write(
        tmp.file("c.jsonl"),
        R"({"id":"c3","name":"A","email":"a@x","ts":"2010-03-01T00:00:00Z","files":["f"]})" "\n"
        R"({"id":"c1","name":"A","email":"a@x","ts":"2010-01-01T00:00:00Z","files":["f"]})" "\n"
        R"({"id":"c2","name":"A","email":"a@x","ts":"2010-02-01T00:00:00Z","files":["f"]})" "\n");
    auto result = parse_commit_log(path);
    REQUIRE(result.records.size() == 3);

    // reference order: sort the (timestamp, id) pairs independently
    std::vector<std::pair<Instant, std::string>> expected;
    for (const auto& r : result.records) expected.emplace_back(r.timestamp, r.commit_id);
    std::sort(expected.begin(), expected.end());

    Corpus corpus;
    corpus.commits = std::move(result.records);
    sort_corpus_records(corpus);
    for (std::size_t i = 0; i < corpus.commits.size(); ++i) {
        CHECK(corpus.commits[i].timestamp == expected[i].first);
        CHECK(corpus.commits[i].commit_id == expected[i].second);
    }
}

namespace {

const char* kTwoMessageMbox =
    "From ann@x.org Thu Jan  1 10:00:00 2010\n"
    "From: Ann <ann@x.org>\n"
    "Date: Thu, 1 Jan 2010 10:00:00 +0000\n"
    "Message-ID: <m0@x>\n"
    "Subject: hello\n"
    "\n"
    "hi\n"
    "\n"
    "From bob@y.org Thu Jan  1 11:00:00 2010\n"
    "From: Bob <bob@y.org>\n"
    "Date: Thu, 1 Jan 2010 11:00:00 +0000\n"
    "Message-ID: <m1@x>\n"
    "In-Reply-To: <m0@x>\n"
    "\n"
    "yo\n";

} // namespace

TEST_CASE("mbox: In-Reply-To header echoed without brackets") {
    TempDir tmp("mail");
    const auto result = parse_mailbox(write(tmp.file("m.mbox"), kTwoMessageMbox));
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].message_id == "m0@x");
    CHECK_FALSE(result.records[0].in_reply_to.has_value());
    REQUIRE(result.records[1].in_reply_to.has_value());
    CHECK(*result.records[1].in_reply_to == "m0@x");
    CHECK(result.records[1].sender_email == "bob@y.org");
}

TEST_CASE("mbox: References supplies the fallback parent") {
    TempDir tmp("mail");
    const auto path = write(tmp.file("m.mbox"),
                            "From c@z.org Thu Jan  1 12:00:00 2010\n"
                            "From: Cyn <C@Z.org>\n"
                            "Date: Thu, 1 Jan 2010 12:00:00 +0000\n"
                            "Message-ID: <m2@x>\n"
                            "References: <m0@x> <m1@x>\n"
                            "\n"
                            "body\n");
    const auto result = parse_mailbox(path);
    REQUIRE(result.records.size() == 1);
    REQUIRE(result.records[0].in_reply_to.has_value());
    CHECK(*result.records[0].in_reply_to == "m0@x");
    CHECK(result.records[0].sender_email == "c@z.org"); // lowercased
}

TEST_CASE("mbox: missing Date drops the message with a warning") {
    TempDir tmp("mail");
    const auto path = write(tmp.file("m.mbox"),
                            "From a@x.org Thu Jan  1 10:00:00 2010\n"
                            "From: A <a@x.org>\n"
                            "Message-ID: <m0@x>\n"
                            "\n"
                            "body\n");
    const auto result = parse_mailbox(path);
    CHECK(result.records.empty());
    REQUIRE_FALSE(result.warnings.empty());
    CHECK(result.warnings[0].find("Date") != std::string::npos);
}

TEST_CASE("mbox: undecodable From keeps the record with unresolved sender") {
    TempDir tmp("mail");
    const auto path = write(tmp.file("m.mbox"),
                            "From - Thu Jan  1 10:00:00 2010\n"
                            "From: garbled header no address\n"
                            "Date: Thu, 1 Jan 2010 10:00:00 +0000\n"
                            "Message-ID: <m0@x>\n"
                            "\n"
                            "body\n");
    const auto result = parse_mailbox(path);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].sender_name == "unresolved");
    CHECK(result.records[0].sender_email.empty());
    CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("mbox: rfc2822 dates with offsets and folded headers") {
    TempDir tmp("mail");
    const auto path = write(tmp.file("m.mbox"),
                            "From a@x.org Thu Jan  1 10:00:00 2010\n"
                            "From: Long Name\n"
                            " Person <a@x.org>\n"
                            "Date: Tue, 5 Jan 2010 14:02:33 +0100\n"
                            "Message-ID: <m0@x>\n"
                            "\n"
                            "body\n");
    const auto result = parse_mailbox(path);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].timestamp == *parse_iso8601("2010-01-05T13:02:33Z"));
    CHECK(result.records[0].sender_name == "Long Name Person");
}

TEST_CASE("mail JSON-Lines equivalent accepted") {
    TempDir tmp("mail");
    const auto path = write(
        tmp.file("m.jsonl"),
        R"({"message_id":"m0","name":"A","email":"A@X.org","ts":"2010-01-01T10:00:00Z"})" "\n"
        R"({"message_id":"m1","name":"B","email":"b@y.org","ts":"2010-01-01T11:00:00Z","in_reply_to":"m0"})"
        "\n");
    const auto result = parse_mailbox(path);
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].sender_email == "a@x.org");
    CHECK(result.records[1].in_reply_to.value() == "m0");
}

namespace {

std::string sentence_header() {
    return "project,developer,ts,valence,arousal,dominance,sad,anger,love,joy,sentiment,polite,"
           "mood,modality\n";
}

} // namespace

TEST_CASE("sentences: mood code decodes to the four classes") {
    TempDir tmp("sent");
    const auto path = write(tmp.file("s.csv"),
                            sentence_header() +
                                "p,a@x.org,2010-01-01T00:00:00Z,0.5,0.4,0.3,0,0,0,1,0.5,1,1,0.2\n");
    const auto result = parse_sentiment_sentences(path);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].mood == Mood::imperative);
    CHECK(result.records[0].polite == 1);
    CHECK(result.records[0].sentiment_strength == 0.5);
}

TEST_CASE("sentences: out-of-range strength rejects the row") {
    TempDir tmp("sent");
    const auto path = write(tmp.file("s.csv"),
                            sentence_header() +
                                "p,a@x.org,2010-01-01T00:00:00Z,0.5,0.4,0.3,0,0,0,1,1.5,1,1,0.2\n");
    const auto result = parse_sentiment_sentences(path);
    CHECK(result.records.empty());
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("row 2") != std::string::npos);
}

TEST_CASE("sentences: counted fixture keeps valid rows and warns per invalid row") {
    TempDir tmp("sent");
    std::string text = sentence_header();
    for (int i = 0; i < 8; ++i)
        text += "p,d" + std::to_string(i) + "@x.org,2010-01-01T00:00:00Z,0.5,0.4,0.3,0,0,0,0,0.1,0,0,0.0\n";
    text += "p,bad1@x.org,2010-01-01T00:00:00Z,0.5,0.4,0.3,0,0,0,0,1.5,0,0,0.0\n"; // strength
    text += "p,bad2@x.org,2010-01-01T00:00:00Z,0.5,0.4,0.3,0,0,0,0,0.1,0,7,0.0\n"; // mood
    const auto result = parse_sentiment_sentences(write(tmp.file("s.csv"), text));
    CHECK(result.records.size() == 8);
    CHECK(result.warnings.size() == 2);
}

TEST_CASE("sentences: unknown mood code rejected") {
    TempDir tmp("sent");
    const auto path = write(tmp.file("s.csv"),
                            sentence_header() +
                                "p,a@x.org,2010-01-01T00:00:00Z,0.5,0.4,0.3,0,0,0,1,0.5,1,9,0.2\n");
    const auto result = parse_sentiment_sentences(path);
    CHECK(result.records.empty());
    CHECK(result.warnings.size() == 1);
}

namespace {

Corpus corpus_with(std::vector<CommitRecord> commits, std::vector<MessageRecord> messages,
                   std::vector<SentenceRecord> sentences = {}) {
    Corpus c;
    c.project = "p";
    c.commits = std::move(commits);
    c.messages = std::move(messages);
    c.sentences = std::move(sentences);
    resolve_identities(c);
    return c;
}

CommitRecord commit(const std::string& name, const std::string& email) {
    CommitRecord r;
    r.commit_id = "c";
    r.author_name = name;
    r.author_email = lower_ascii(email);
    r.timestamp = 0;
    r.files = {"f"};
    return r;
}

MessageRecord message(const std::string& name, const std::string& email) {
    MessageRecord r;
    r.message_id = "m" + name + email;
    r.sender_name = name;
    r.sender_email = lower_ascii(email);
    r.timestamp = 0;
    return r;
}

} // namespace

TEST_CASE("identities: case-insensitive email match merges sources") {
    const Corpus c = corpus_with({commit("John Doe", "J.Doe@X.com")},
                                 {message("john doe", "j.doe@x.com")});
    CHECK(c.identities.size() == 1);
    CHECK(c.commits[0].developer == c.messages[0].developer);
}

TEST_CASE("identities: same normalized name bridges disjoint emails") {
    const Corpus c = corpus_with({commit("Sam  Fix", "a@x")}, {message("sam fix", "b@y")});
    CHECK(c.identities.size() == 1);
    CHECK(c.identities[0].emails == std::set<std::string>{"a@x", "b@y"});
}

TEST_CASE("identities: six personas with two aliases across three sources") {
    std::vector<CommitRecord> commits;
    std::vector<MessageRecord> messages;
    std::vector<SentenceRecord> sentences;
    for (int i = 0; i < 6; ++i) {
        const std::string name = "Person " + std::to_string(i);
        commits.push_back(commit(name, "p" + std::to_string(i) + ".a@x"));
        messages.push_back(message(name, "p" + std::to_string(i) + ".b@x"));
        SentenceRecord s;
        s.project = "p";
        s.developer_key = name; // name key links to both aliases
        sentences.push_back(s);
    }
    const Corpus c = corpus_with(std::move(commits), std::move(messages), std::move(sentences));
    CHECK(c.identities.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(c.commits[i].developer != kUnresolved);
        CHECK(c.sentences[i].developer != kUnresolved);
    }
}

TEST_CASE("identities: merging is transitive through shared names and emails") {
    // A(e1,nX) B(e2,nX) C(e2,nY) D(e3,nY) all collapse into one identity
    const Corpus c = corpus_with({commit("NX", "e1@x"), commit("NX", "e2@x"),
                                  commit("NY", "e2@x"), commit("NY", "e3@x")},
                                 {});
    CHECK(c.identities.size() == 1);
    CHECK(c.identities[0].emails.size() == 3);
}

TEST_CASE("identities: records with no usable key land in the unresolved bucket") {
    MessageRecord bad;
    bad.message_id = "m";
    bad.sender_name = "unresolved"; // placeholder from an undecodable header
    bad.sender_email = "";
    const Corpus c = corpus_with({commit("A", "a@x")}, {bad});
    CHECK(c.messages[0].developer == kUnresolved);
    CHECK(c.commits[0].developer != kUnresolved);
    CHECK_FALSE(c.warnings.empty()); // unresolved fraction reported
}

TEST_CASE("identities: partition is total over all records") {
    std::vector<CommitRecord> commits;
    for (int i = 0; i < 20; ++i)
        commits.push_back(commit("N" + std::to_string(i % 7), "e" + std::to_string(i % 5) + "@x"));
    const Corpus c = corpus_with(std::move(commits), {});
    for (const auto& r : c.commits) {
        REQUIRE(r.developer != kUnresolved);
        REQUIRE(r.developer >= 0);
        REQUIRE(static_cast<std::size_t>(r.developer) < c.identities.size());
    }
}

TEST_CASE("ingestion is deterministic: identical input, identical serialized corpus") {
    TempDir tmp("full");
    const auto commits = write(
        tmp.file("c.jsonl"),
        R"({"id":"a1","name":"Ann","email":"ann@x.org","ts":"2010-01-01T00:00:00Z","files":["f"]})"
        "\n");
    const auto mail = write(tmp.file("m.mbox"), kTwoMessageMbox);
    const auto sentences = write(tmp.file("s.csv"),
                                 sentence_header() +
                                     "p,ann@x.org,2010-01-01T00:00:00Z,0.5,0.4,0.3,0,0,0,1,0.5,1,1,0.2\n");
    const Corpus c1 = load_corpus("p", commits, mail, sentences);
    const Corpus c2 = load_corpus("p", commits, mail, sentences);
    CHECK(corpus_to_json(c1).dump() == corpus_to_json(c2).dump());
}

TEST_CASE("corpus JSON round-trips") {
    TempDir tmp("full");
    const auto commits = write(
        tmp.file("c.jsonl"),
        R"({"id":"a1","name":"Ann","email":"ann@x.org","ts":"2010-01-01T00:00:00Z","tz_offset_minutes":60,"files":["f","g"]})"
        "\n");
    const auto mail = write(tmp.file("m.mbox"), kTwoMessageMbox);
    const auto sentences = write(tmp.file("s.csv"),
                                 sentence_header() +
                                     "p,ann@x.org,2010-01-01T00:00:00Z,0.5,0.4,0.3,0,0,0,1,-0.25,1,2,0.2\n");
    const Corpus c = load_corpus("p", commits, mail, sentences);
    const Corpus back = corpus_from_json(corpus_to_json(c));
    CHECK(corpus_to_json(back).dump() == corpus_to_json(c).dump());
}

TEST_CASE("csv: rfc-4180 quoting round-trips awkward fields") {
    TempDir tmp("csv");
    const std::vector<std::vector<std::string>> rows = {
        {"plain", "with,comma", "with \"quotes\""},
        {"multi\nline", "", "trailing space "},
        {"ünïcode", "semi;colon", "\"\""}};
    {
        CsvWriter w(tmp.file("t.csv"));
        for (const auto& r : rows) w.row(r);
    }
    const std::string text = testsupport::slurp(tmp.file("t.csv"));
    std::size_t pos = 0;
    std::vector<std::string> row;
    std::vector<std::vector<std::string>> back;
    while (csv_next_record(text, pos, row)) back.push_back(row);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(back[i] == rows[i]);
}

TEST_CASE("sentences: JSON-Lines input is equivalent to CSV") {
    TempDir tmp("sent_jsonl");
    const auto path = write(
        tmp.file("s.jsonl"),
        R"({"project":"p","developer":"a@x.org","ts":"2010-01-01T00:00:00Z","valence":0.5,"arousal":0.4,"dominance":0.3,"sad":0,"anger":0,"love":0,"joy":1,"sentiment":-0.25,"polite":1,"mood":2,"modality":0.2})"
        "\n"
        R"({"project":"p","developer":"b@x.org","ts":"2010-01-02T00:00:00Z","valence":0.1,"arousal":0.2,"dominance":0.3,"sad":1,"anger":0,"love":0,"joy":0,"sentiment":2.0,"polite":0,"mood":0,"modality":0.0})"
        "\n");
    const auto result = parse_sentiment_sentences(path);
    REQUIRE(result.records.size() == 1); // second row violates the sentiment bound
    CHECK(result.records[0].mood == Mood::conditional);
    CHECK(result.records[0].sentiment_strength == -0.25);
    CHECK(result.warnings.size() == 1);
}

TEST_CASE("duplicate message ids are dropped with a warning at corpus load") {
    TempDir tmp("dup");
    const auto commits = write(
        tmp.file("c.jsonl"),
        R"({"id":"a1","name":"Ann","email":"ann@x.org","ts":"2010-01-01T00:00:00Z","files":["f"]})"
        "\n");
    const auto mail = write(tmp.file("m.mbox"),
                            "From ann@x.org Thu Jan  1 10:00:00 2010\n"
                            "From: Ann <ann@x.org>\n"
                            "Date: Thu, 1 Jan 2010 10:00:00 +0000\n"
                            "Message-ID: <m0@x>\n"
                            "\n"
                            "one\n"
                            "\n"
                            "From ann@x.org Thu Jan  1 11:00:00 2010\n"
                            "From: Ann <ann@x.org>\n"
                            "Date: Thu, 1 Jan 2010 11:00:00 +0000\n"
                            "Message-ID: <m0@x>\n"
                            "\n"
                            "two\n");
    const auto sentences = write(tmp.file("s.csv"), sentence_header());
    const Corpus c = load_corpus("p", commits, mail, sentences);
    CHECK(c.messages.size() == 1);
    CHECK(std::any_of(c.warnings.begin(), c.warnings.end(), [](const std::string& w) {
        return w.find("duplicate message id") != std::string::npos;
    }));
}
