#include "mrbench/llm.hpp"

#include <atomic>
#include <cctype>
#include <ctime>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "mrbench/error.hpp"
#include "mrbench/rng.hpp"
#include "mrbench/rubric.hpp"

namespace mrbench::llm {

using nlohmann::json;

namespace {

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string env(const char* name) {
    const char* v = std::getenv(name);
    return v ? v : "";
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string letters_only(const std::string& s) {
    std::string out;
    for (char c : s)
        if (std::isalpha(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string count_word(int n) {
    static const char* words[] = {"zero", "one", "two",   "three", "four",   "five", "six",
                                  "seven", "eight", "nine", "ten", "eleven", "twelve"};
    return n >= 0 && n <= 12 ? words[n] : std::to_string(n);
}

std::string lower_first(std::string s) {
    if (s.size() > 1 && std::isupper(static_cast<unsigned char>(s[0])) &&
        !std::isupper(static_cast<unsigned char>(s[1])))
        s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

std::string strip_markup(std::string s) {
    s = std::regex_replace(s, std::regex(R"(\*\*|__|`)"), "");
    return trim(s);
}

}  // namespace

json ChatRequest::to_json() const {
    json msgs = json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    json j{{"model", model}, {"messages", msgs}};
    if (temperature) j["temperature"] = *temperature;
    return j;
}

ChatRequest ChatRequest::from_json(const json& j) {
    ChatRequest r;
    r.model = j.at("model").get<std::string>();
    for (const auto& m : j.at("messages"))
        r.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    if (j.contains("temperature") && !j["temperature"].is_null()) r.temperature = j["temperature"].get<double>();
    return r;
}

ChatResponse parse_chat_completion(const json& body) {
    try {
        ChatResponse r;
        const auto& choices = body.at("choices");
        if (!choices.is_array() || choices.empty()) throw ParseError("choices", "no completion returned");
        const auto& content = choices[0].at("message").at("content");
        r.text = content.is_null() ? "" : content.get<std::string>();
        r.model = body.value("model", std::string{});
        if (body.contains("usage") && body["usage"].is_object()) {
            r.usage.prompt_tokens = body["usage"].value("prompt_tokens", std::int64_t{0});
            r.usage.completion_tokens = body["usage"].value("completion_tokens", std::int64_t{0});
        }
        return r;
    } catch (const json::exception& e) {
        throw ParseError("chat completion", e.what());
    }
}

json Transcript::to_json() const {
    return json{{"request", request.to_json()},
                {"response_text", response_text},
                {"model", model},
                {"timestamp", timestamp},
                {"usage", {{"prompt_tokens", usage.prompt_tokens}, {"completion_tokens", usage.completion_tokens}}},
                {"mode", mode}};
}

ReplayTransport::ReplayTransport(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error("replay directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f);
        json doc;
        try {
            doc = json::parse(in);
            const auto key = ChatRequest::from_json(doc.at("request")).to_json().dump();
            fixtures_[key] = doc.at("response");
        } catch (const json::exception& e) {
            throw ParseError(f.string(), e.what());
        }
    }
}

ChatResponse ReplayTransport::send(const ChatRequest& request) {
    const auto key = request.to_json().dump();
    auto it = fixtures_.find(key);
    if (it == fixtures_.end()) {
        const std::string first = request.messages.empty() ? "" : request.messages.back().content.substr(0, 60);
        throw ReferenceError("no replay fixture for request " + hex64(hash_name(key)) + " (model " + request.model +
                             ", \"" + first + "...\")");
    }
    return parse_chat_completion(it->second);
}

std::filesystem::path write_replay_fixture(const std::filesystem::path& dir, const ChatRequest& request,
                                           const ChatResponse& response, const std::string& label) {
    std::filesystem::create_directories(dir);
    const auto key = request.to_json().dump();
    std::string stem;
    for (char c : label) stem += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '-';
    const auto path = dir / (stem + "-" + hex64(hash_name(key)).substr(0, 8) + ".json");
    json body{{"id", "replay-" + hex64(hash_name(key))},
              {"object", "chat.completion"},
              {"model", response.model.empty() ? request.model : response.model},
              {"choices",
               json::array({{{"index", 0},
                             {"message", {{"role", "assistant"}, {"content", response.text}}},
                             {"finish_reason", "stop"}}})},
              {"usage",
               {{"prompt_tokens", response.usage.prompt_tokens},
                {"completion_tokens", response.usage.completion_tokens},
                {"total_tokens", response.usage.prompt_tokens + response.usage.completion_tokens}}}};
    std::ofstream out(path, std::ios::binary);
    out << json{{"request", request.to_json()}, {"response", body}}.dump(2) << '\n';
    if (!out) throw Error("cannot write " + path.string());
    return path;
}

GatewayConfig GatewayConfig::from_env() {
    GatewayConfig c;
    if (auto v = env("MRBENCH_LLM_URL"); !v.empty()) c.base_url = v;
    if (auto v = env("MRBENCH_LLM_MODEL"); !v.empty()) c.model = v;
    c.api_key = env("MRBENCH_LLM_API_KEY");
    if (c.api_key.empty()) c.api_key = env("OPENAI_API_KEY");
    if (auto v = env("MRBENCH_REPLAY_DIR"); !v.empty()) c.replay_dir = v;
    else c.replay_dir = default_data_dir() / "replay";
    if (auto v = env("MRBENCH_TRANSCRIPT_DIR"); !v.empty()) c.transcript_dir = v;
    return c;
}

namespace {

std::unique_ptr<Transport> make_transport(const GatewayConfig& c) {
    if (c.live()) return std::make_unique<HttpTransport>(c.base_url, c.api_key);
    return std::make_unique<ReplayTransport>(c.replay_dir);
}

std::string new_session_id() {
    static std::atomic<unsigned> counter{0};
    const std::time_t t = std::time(nullptr);
    return std::to_string(static_cast<long long>(t)) + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++);
}

}  // namespace

Session::Session(const GatewayConfig& config, RetryPolicy retry)
    : Session(make_transport(config), config.model, config.transcript_dir, std::move(retry)) {}

Session::Session(std::unique_ptr<Transport> transport, std::string model, std::filesystem::path transcript_dir,
                 RetryPolicy retry)
    : transport_(std::move(transport)),
      model_(std::move(model)),
      transcript_dir_(std::move(transcript_dir)),
      retry_(std::move(retry)),
      session_id_(new_session_id()) {
    if (!retry_.sleep) retry_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    if (retry_.attempts < 1) retry_.attempts = 1;
}

ChatResponse Session::complete(const ChatRequest& request) {
    auto backoff = retry_.initial_backoff;
    ChatResponse response;
    for (int attempt = 1;; ++attempt) {
        try {
            response = transport_->send(request);
            break;
        } catch (const TransportError& e) {
            if (!e.retriable() || attempt >= retry_.attempts) throw;
            retry_.sleep(backoff);
            backoff = std::chrono::milliseconds(static_cast<long long>(static_cast<double>(backoff.count()) * retry_.multiplier));
        }
    }

    Transcript t{request, response.text, response.model.empty() ? request.model : response.model, utc_now(),
                 response.usage, transport_->mode()};
    if (!transcript_dir_.empty()) {
        std::filesystem::create_directories(transcript_dir_);
        const auto path = transcript_dir_ / (session_id_ + "-" + std::to_string(transcripts_.size()) + ".json");
        std::ofstream out(path, std::ios::binary);
        out << t.to_json().dump(2) << '\n';
        if (!out) throw Error("cannot write transcript " + path.string());
    }
    transcripts_.push_back(std::move(t));
    return response;
}

// ---- generation ----

std::string render_generation_prompt(const SutDescriptor& sut, int count) {
    std::ostringstream p;
    p << "Generate " << count_word(count) << " metamorphic relations (MRs) for the " << sut.name << " program";
    if (!sut.description.empty()) p << ", which handles " << lower_first(sut.description);
    p << ". The main inputs are " << lower_first(sut.inputs) << ", and the main outputs are "
      << lower_first(sut.outputs) << ".\n"
      << "Write each MR on its own line as \"<number>. <title>: <description>\", where the description states "
         "the source input, how the follow-up input is derived, and the expected relation between the outputs.";
    return p.str();
}

ChatRequest generation_request(const SutDescriptor& sut, int count, const std::string& model) {
    return ChatRequest{model, {{"user", render_generation_prompt(sut, count)}}, std::nullopt};
}

std::vector<MrDraft> parse_mr_drafts(const std::string& text) {
    static const std::regex item(R"(^\s*(?:[-*]\s*)?(?:\*\*)?(?:MR\s*)?(\d{1,3})\s*[.):]\s*(.+)$)", std::regex::icase);
    std::vector<MrDraft> out;
    for (const auto& raw : lines_of(text)) {
        std::smatch m;
        const std::string line = trim(raw);
        if (std::regex_match(line, m, item)) {
            std::string body = m[2].str();
            MrDraft d;
            d.index = std::stoi(m[1].str());
            // Title ends at the first colon outside markup; a bold title may swallow it.
            auto colon = body.find(':');
            if (colon == std::string::npos) {
                d.title = strip_markup(body);
            } else {
                d.title = strip_markup(body.substr(0, colon));
                d.narrative = strip_markup(body.substr(colon + 1));
            }
            if (d.title.empty()) continue;
            out.push_back(std::move(d));
        } else if (!out.empty() && !line.empty()) {
            auto& n = out.back().narrative;
            n += (n.empty() ? "" : " ") + strip_markup(line);
        }
    }
    return out;
}

GenerationResult generate_mrs(const SutDescriptor& sut, int count, Session& session) {
    if (count < 1) throw PreconditionError("MR count must be positive");
    const auto response = session.complete(generation_request(sut, count, session.model()));
    GenerationResult result;
    result.sut_id = sut.id;
    result.requested = count;
    result.raw_text = response.text;
    result.drafts = parse_mr_drafts(response.text);
    if (static_cast<int>(result.drafts.size()) > count) result.drafts.resize(static_cast<std::size_t>(count));
    return result;
}

// ---- evaluation ----

EvaluatorPersona EvaluatorPersona::standard() {
    EvaluatorPersona p;
    p.scheme = Scheme::Updated;
    p.role_preamble =
        "You are the MR evaluator for a metamorphic testing study. You receive one metamorphic relation (MR) "
        "for a named system under test and score it against the criteria below. Judge the MR text only.";
    std::ostringstream c;
    c << "Criteria (award one attained level per criterion):\n";
    for (const auto& spec : criterion_specs(Scheme::Updated)) {
        c << "- " << spec.label << " (0-" << spec.max_points << "):";
        for (std::size_t i = 0; i < spec.levels.size(); ++i) c << " " << i << " = " << spec.levels[i] << ";";
        c.seekp(-1, std::ios::cur);
        c << ".\n";
    }
    c << "Gates: if Completeness is 0, every other criterion is 0. If Correctness is 0, every criterion except "
         "Completeness is 0.";
    p.criteria_block = c.str();
    p.answer_format =
        "Answer format: start with a fenced block tagged scores containing exactly one line per criterion in the "
        "form \"<Criterion>: <level>\" using the criterion names above, then give a short justification for each "
        "criterion.";
    return p;
}

std::string EvaluatorPersona::render() const { return role_preamble + "\n\n" + criteria_block + "\n\n" + answer_format; }

std::string render_evaluation_prompt(const MetamorphicRelation& mr, const SutDescriptor* sut) {
    std::ostringstream p;
    if (sut) {
        p << "System under test: " << sut->name;
        if (!sut->description.empty()) p << " (" << sut->description << ")";
        p << ". Inputs: " << sut->inputs << ". Outputs: " << sut->outputs << ".\n";
    } else {
        p << "System under test: " << mr.sut_id << ".\n";
    }
    p << "MR: " << mr.title << "\n" << mr.narrative;
    return p.str();
}

ChatRequest evaluation_request(const MetamorphicRelation& mr, const SutDescriptor* sut,
                               const EvaluatorPersona& persona, const std::string& model) {
    return ChatRequest{model, {{"system", persona.render()}, {"user", render_evaluation_prompt(mr, sut)}}, 0.0};
}

ScoreTable parse_score_table(const std::string& text) {
    std::map<std::string, std::string> by_letters;
    for (auto name : kUpdatedCriteria) by_letters[letters_only(std::string(name))] = std::string(name);
    by_letters["generalisability"] = "generalizability";

    std::vector<std::string> lines = lines_of(text);
    std::size_t begin = 0, end = lines.size();
    bool fenced = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).rfind("```scores", 0) == 0) {
            begin = i + 1;
            end = lines.size();
            for (std::size_t k = begin; k < lines.size(); ++k)
                if (trim(lines[k]).rfind("```", 0) == 0) {
                    end = k;
                    break;
                }
            fenced = true;
            break;
        }
    }

    static const std::regex integer(R"(-?\d+)");
    static const std::regex numbering(R"(^\s*\d+\s*[.)]\s*)");
    ScoreTable out;
    std::size_t last = begin;
    auto scan = [&](bool pipes) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::string line = trim(lines[i]);
            std::vector<std::string> cells;
            if (pipes) {
                if (line.find('|') == std::string::npos) continue;
                std::stringstream ss(line);
                for (std::string cell; std::getline(ss, cell, '|');) cells.push_back(trim(cell));
                while (!cells.empty() && cells.front().empty()) cells.erase(cells.begin());
                while (!cells.empty() && cells.back().empty()) cells.pop_back();
                if (cells.empty() || std::all_of(cells.begin(), cells.end(), [](const std::string& c) {
                        return c.find_first_not_of("-: ") == std::string::npos;
                    }))
                    continue;
            } else {
                const auto colon = line.find(':');
                if (colon == std::string::npos) continue;
                cells = {line.substr(0, colon), line.substr(colon + 1)};
            }
            std::size_t at = cells.size();
            std::string criterion;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                auto it = by_letters.find(letters_only(std::regex_replace(cells[c], numbering, "")));
                if (it != by_letters.end()) {
                    at = c;
                    criterion = it->second;
                    break;
                }
            }
            std::smatch m;
            std::string rest;
            for (std::size_t c = at + 1; c < cells.size() && at < cells.size(); ++c) rest += cells[c] + " ";
            if (at == cells.size() || !std::regex_search(rest, m, integer)) {
                if (pipes && std::regex_search(line, integer)) out.unmatched_rows.push_back(line);
                continue;
            }
            if (out.scores.count(criterion))
                throw ParseError("score table", "duplicate row for criterion '" + criterion_label(criterion) + "'");
            out.scores[criterion] = std::stoi(m.str());
            last = i + 1;
            if (!fenced && out.scores.size() == kUpdatedCriteria.size()) return;
        }
    };
    scan(true);
    if (out.scores.empty()) {
        out.unmatched_rows.clear();
        scan(false);
    }

    if (out.scores.size() < kUpdatedCriteria.size()) {
        std::string missing;
        for (auto name : kUpdatedCriteria)
            if (!out.scores.count(std::string(name))) missing += (missing.empty() ? "" : ", ") + criterion_label(name);
        throw ParseError("score table", "found " + std::to_string(out.scores.size()) +
                                            " of 7 criteria; missing " + missing);
    }
    std::string tail;
    for (std::size_t i = fenced ? end + 1 : last; i < lines.size(); ++i) tail += lines[i] + "\n";
    out.justification = trim(tail);
    return out;
}

RubricScoreSheet evaluate_mr(const MetamorphicRelation& mr, const SutDescriptor* sut, const EvaluatorPersona& persona,
                             Session& session, const EvaluationOptions& options) {
    if (persona.scheme != Scheme::Updated) throw PreconditionError("the LLM evaluator scores the Updated scheme only");
    const auto response = session.complete(evaluation_request(mr, sut, persona, session.model()));
    const ScoreTable table = parse_score_table(response.text);

    RubricScoreSheet sheet;
    sheet.mr_id = mr.mr_id;
    sheet.sut_id = mr.sut_id;
    sheet.evaluator_id = options.evaluator_id.empty() ? "llm:" + session.model() : options.evaluator_id;
    sheet.evaluator_kind = EvaluatorKind::Llm;
    sheet.scheme = Scheme::Updated;
    sheet.scores = table.scores;
    sheet.justification = table.justification;
    sheet.created_at = options.created_at;
    sheet.generator_model = options.generator_model;

    for (const auto& [name, level] : sheet.scores) {
        const int max = criterion_max(Scheme::Updated, name);
        if (level < 0 || level > max)
            throw ParseError("score table", criterion_label(name) + " level " + std::to_string(level) + " outside 0.." +
                                                std::to_string(max));
    }
    if (!validate_score_sheet(sheet).ok()) {
        sheet = apply_gates(std::move(sheet));
        sheet.flags.push_back("gate-corrected");
        sheet.justification = "[gate-corrected] " + sheet.justification;
    }
    return sheet;
}

}  // namespace mrbench::llm
