#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <variant>

#include "mrbench/catalog.hpp"
#include "mrbench/error.hpp"
#include "mrbench/llm.hpp"
#include "mrbench/rubric.hpp"

using namespace mrbench;
using namespace mrbench::llm;
namespace fs = std::filesystem;

namespace {

const Catalog& catalog() {
    static const Catalog c = load_catalog(default_catalog_path());
    return c;
}

Session replay_session(const fs::path& dir = default_data_dir() / "replay") {
    return Session(std::make_unique<ReplayTransport>(dir), "gpt-4");
}

/// Replies from a script; an int entry raises a TransportError with that status.
class ScriptedTransport : public Transport {
public:
    explicit ScriptedTransport(std::vector<std::variant<int, std::string>> script, int* calls)
        : script_(std::move(script)), calls_(calls) {}
    ChatResponse send(const ChatRequest&) override {
        const auto step = script_.at(static_cast<std::size_t>((*calls_)++));
        if (const int* status = std::get_if<int>(&step))
            throw TransportError("HTTP " + std::to_string(*status), *status == 429 || *status >= 500, *status);
        return ChatResponse{std::get<std::string>(step), "gpt-4", {}};
    }
    std::string mode() const override { return "scripted"; }

private:
    std::vector<std::variant<int, std::string>> script_;
    int* calls_;
};

/// Counts how many requests reach the wrapped transport.
class CountingTransport : public Transport {
public:
    CountingTransport(std::unique_ptr<Transport> inner, int* calls) : inner_(std::move(inner)), calls_(calls) {}
    ChatResponse send(const ChatRequest& r) override {
        ++*calls_;
        return inner_->send(r);
    }
    std::string mode() const override { return inner_->mode(); }

private:
    std::unique_ptr<Transport> inner_;
    int* calls_;
};

RetryPolicy recording_retry(std::vector<long>* sleeps) {
    RetryPolicy p;
    p.sleep = [sleeps](std::chrono::milliseconds d) { sleeps->push_back(static_cast<long>(d.count())); };
    return p;
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("mrbench-test-" + name);
    fs::remove_all(dir);
    return dir;
}

const char* kTable = R"(Here is my assessment.

| Criterion | Score |
|---|---|
| Completeness | 1 |
| Correctness | 3 |
| Generalizability | 2 |
| Novelty | 1 |
| Clarity | 3 |
| Computational Feasibility | 3 |
| Applicability | 2 |

The relation is sound.)";

}  // namespace

TEST(Wire, RequestRoundTrip) {
    ChatRequest r{"gpt-4", {{"system", "be brief"}, {"user", "hi"}}, 0.0};
    const auto back = ChatRequest::from_json(r.to_json());
    EXPECT_EQ(back.model, r.model);
    EXPECT_EQ(back.messages, r.messages);
    EXPECT_EQ(back.temperature, r.temperature);
    EXPECT_EQ(r.to_json().dump(), back.to_json().dump());
}

TEST(Wire, ParseChatCompletion) {
    const auto body = nlohmann::json::parse(R"({"model": "gpt-4-0613", "choices": [{"message": {"role": "assistant",
        "content": "hello"}}], "usage": {"prompt_tokens": 5, "completion_tokens": 1}})");
    const auto r = parse_chat_completion(body);
    EXPECT_EQ(r.text, "hello");
    EXPECT_EQ(r.model, "gpt-4-0613");
    EXPECT_EQ(r.usage.prompt_tokens, 5);
    EXPECT_THROW(parse_chat_completion(nlohmann::json::parse(R"({"choices": []})")), ParseError);
}

TEST(Drafts, ParseNumberedList) {
    const auto d = parse_mr_drafts(
        "Sure, here they are:\n1. **Additive Angle**: add pi.\n  Output flips sign.\n2) Negative Angle - no colon\n"
        "MR3. Reflection: sin(pi - x) = sin(x)\n\nThat is all.");
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d[0].title, "Additive Angle");
    EXPECT_EQ(d[0].narrative, "add pi. Output flips sign.");
    EXPECT_EQ(d[2].index, 3);
    EXPECT_EQ(d[2].title, "Reflection");
    EXPECT_TRUE(parse_mr_drafts("no list here").empty());
}

TEST(Generate, ReplayAvPerception) {
    auto session = replay_session();
    const auto r = generate_mrs(*catalog().find_sut("AV-PERCEPTION"), 8, session);
    ASSERT_EQ(r.drafts.size(), 8u);
    EXPECT_FALSE(r.shortfall());
    EXPECT_EQ(r.drafts[0].title, "Image Brightness Adjustment MR");
    EXPECT_EQ(session.transcripts().size(), 1u);
    EXPECT_EQ(session.transcripts()[0].mode, "replay");
}

TEST(Generate, ReplaySinMatchesCatalogTitles) {
    auto session = replay_session();
    const auto r = generate_mrs(*catalog().find_sut("SIN"), 8, session);
    const auto mrs = catalog().mrs_for("SIN");
    ASSERT_EQ(r.drafts.size(), mrs.size());
    for (std::size_t i = 0; i < mrs.size(); ++i) EXPECT_EQ(r.drafts[i].title, mrs[i]->title);
}

TEST(Generate, CountMustBePositive) {
    auto session = replay_session();
    EXPECT_THROW(generate_mrs(*catalog().find_sut("SIN"), 0, session), PreconditionError);
}

TEST(Generate, ShortReplyIsAShortfall) {
    int calls = 0;
    Session s(std::make_unique<ScriptedTransport>(std::vector<std::variant<int, std::string>>{"1. Only: one"}, &calls),
              "gpt-4");
    const auto r = generate_mrs(*catalog().find_sut("SIN"), 8, s);
    EXPECT_TRUE(r.shortfall());
    EXPECT_EQ(r.drafts.size(), 1u);
}

TEST(Generate, PromptNamesTheProgram) {
    const auto p = render_generation_prompt(*catalog().find_sut("SIN"), 8);
    EXPECT_NE(p.find("eight metamorphic relations"), std::string::npos);
    EXPECT_NE(p.find("SIN"), std::string::npos);
    EXPECT_FALSE(generation_request(*catalog().find_sut("SIN"), 8, "gpt-4").temperature);
}

TEST(ScoreTableParse, MarkdownTable) {
    const auto t = parse_score_table(kTable);
    ASSERT_EQ(t.scores.size(), 7u);
    EXPECT_EQ(t.scores.at("generalizability"), 2);
    EXPECT_EQ(t.scores.at("computational_feasibility"), 3);
    EXPECT_NE(t.justification.find("sound"), std::string::npos);
}

TEST(ScoreTableParse, ProseIsAParseError) {
    EXPECT_THROW(parse_score_table("I think this relation is quite good overall."), ParseError);
}

TEST(ScoreTableParse, DuplicateRowIsNamed) {
    std::string text = kTable;
    text.insert(text.find("| Novelty"), "| Clarity | 2 |\n");
    try {
        parse_score_table(text);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("Clarity"), std::string::npos) << e.what();
    }
}

TEST(ScoreTableParse, FencedBlockWins) {
    const auto t = parse_score_table(std::string("```scores\nCompleteness: 1\nCorrectness: 2\nGeneralizability: 2\n"
                                                 "Novelty: 0\nClarity: 1\nComputational Feasibility: 3\n"
                                                 "Applicability: 3\n```\n") + kTable);
    EXPECT_EQ(t.scores.at("correctness"), 2);
    EXPECT_EQ(t.scores.at("novelty"), 0);
}

TEST(Evaluate, ReplaySinAdditiveAngle) {
    auto session = replay_session();
    EvaluationOptions opts;
    opts.created_at = "2024-01-15T00:00:00Z";
    const auto* m = catalog().find_mr("SIN-MR1");
    const auto s = evaluate_mr(*m, catalog().find_sut("SIN"), EvaluatorPersona::standard(), session, opts);
    EXPECT_EQ(score(s), 19);
    EXPECT_EQ(s.evaluator_kind, EvaluatorKind::Llm);
    EXPECT_EQ(s.evaluator_id, "llm:gpt-4");
    EXPECT_TRUE(s.flags.empty());
}

TEST(Evaluate, GateViolationIsCorrectedAndFlagged) {
    auto session = replay_session(fs::path(MRBENCH_TEST_FIXTURES) / "replay-gate");
    MetamorphicRelation probe;
    probe.mr_id = "PROBE-MR1";
    probe.sut_id = "SIN";
    probe.title = "Incomplete Probe";
    probe.narrative = "The output should stay similar.";
    probe.relation_class = RelationClass::qualitative();
    const auto s = evaluate_mr(probe, catalog().find_sut("SIN"), EvaluatorPersona::standard(), session);
    EXPECT_EQ(s.raw_total(), 0);
    EXPECT_TRUE(validate_score_sheet(s).ok());
    EXPECT_EQ(s.flags, std::vector<std::string>{"gate-corrected"});
    EXPECT_EQ(session.transcripts().front().response_text.find("Clarity: 3") != std::string::npos, true);
}

TEST(Evaluate, OutOfRangeLevelIsAParseError) {
    int calls = 0;
    std::string reply = kTable;
    reply.replace(reply.find("| Clarity | 3"), 13, "| Clarity | 7");
    Session s(std::make_unique<ScriptedTransport>(std::vector<std::variant<int, std::string>>{reply}, &calls), "gpt-4");
    EXPECT_THROW(evaluate_mr(*catalog().find_mr("SIN-MR1"), nullptr, EvaluatorPersona::standard(), s), ParseError);
}

TEST(Replay, MissIsAReferenceError) {
    auto session = replay_session();
    ChatRequest r{"gpt-4", {{"user", "never recorded"}}, std::nullopt};
    EXPECT_THROW(session.complete(r), ReferenceError);
}

TEST(Replay, WrittenFixtureIsServed) {
    const auto dir = scratch_dir("fixture");
    ChatRequest r{"gpt-4", {{"user", "ping"}}, 0.0};
    const auto path = write_replay_fixture(dir, r, ChatResponse{"pong", "gpt-4", {3, 1}}, "Ping Test");
    EXPECT_EQ(path.filename().string().rfind("ping-test-", 0), 0u) << path;
    ReplayTransport t(dir);
    EXPECT_EQ(t.size(), 1u);
    EXPECT_EQ(t.send(r).text, "pong");
    fs::remove_all(dir);
}

TEST(Session, TranscriptsArePersisted) {
    const auto dir = scratch_dir("transcripts");
    int calls = 0;
    Session s(std::make_unique<ScriptedTransport>(std::vector<std::variant<int, std::string>>{"one", "two"}, &calls),
              "gpt-4", dir);
    s.complete({"gpt-4", {{"user", "a"}}, std::nullopt});
    s.complete({"gpt-4", {{"user", "b"}}, std::nullopt});
    EXPECT_EQ(s.transcripts().size(), 2u);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        ++files;
        std::ifstream in(e.path());
        const auto j = nlohmann::json::parse(in);
        EXPECT_TRUE(j.contains("request"));
        EXPECT_TRUE(j.contains("response_text"));
    }
    EXPECT_EQ(files, 2u);
    fs::remove_all(dir);
}

TEST(Retry, TransientFailuresAreRetriedWithBackoff) {
    int calls = 0;
    std::vector<long> sleeps;
    Session s(std::make_unique<ScriptedTransport>(std::vector<std::variant<int, std::string>>{429, 503, "ok"}, &calls),
              "gpt-4", {}, recording_retry(&sleeps));
    EXPECT_EQ(s.complete({"gpt-4", {{"user", "x"}}, std::nullopt}).text, "ok");
    EXPECT_EQ(calls, 3);
    EXPECT_EQ(sleeps, (std::vector<long>{1000, 2000}));
}

TEST(Retry, ClientErrorsAreNotRetried) {
    int calls = 0;
    std::vector<long> sleeps;
    Session s(std::make_unique<ScriptedTransport>(std::vector<std::variant<int, std::string>>{401, "ok"}, &calls),
              "gpt-4", {}, recording_retry(&sleeps));
    EXPECT_THROW(s.complete({"gpt-4", {{"user", "x"}}, std::nullopt}), TransportError);
    EXPECT_EQ(calls, 1);
    EXPECT_TRUE(sleeps.empty());
}

TEST(Retry, DeadEndpointFailsAfterBoundedBackoff) {
    int calls = 0;
    std::vector<long> sleeps;
    auto http = std::make_unique<HttpTransport>("http://127.0.0.1:1/v1", "sk-fake", std::chrono::seconds(2));
    Session s(std::make_unique<CountingTransport>(std::move(http), &calls), "gpt-4", {}, recording_retry(&sleeps));
    try {
        s.complete({"gpt-4", {{"user", "x"}}, std::nullopt});
        FAIL() << "expected TransportError";
    } catch (const TransportError& e) {
        EXPECT_TRUE(e.retriable());
    }
    EXPECT_EQ(calls, 3);
    EXPECT_EQ(sleeps, (std::vector<long>{1000, 2000}));
}

TEST(Config, NoKeyMeansReplay) {
    ::unsetenv("MRBENCH_LLM_API_KEY");
    ::unsetenv("OPENAI_API_KEY");
    EXPECT_FALSE(GatewayConfig::from_env().live());
    ::setenv("MRBENCH_LLM_API_KEY", "sk-test", 1);
    ::setenv("MRBENCH_LLM_MODEL", "local-model", 1);
    const auto c = GatewayConfig::from_env();
    EXPECT_TRUE(c.live());
    EXPECT_EQ(c.model, "local-model");
    ::unsetenv("MRBENCH_LLM_API_KEY");
    ::unsetenv("MRBENCH_LLM_MODEL");
}
