#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "osagent/backend.hpp"
#include "osagent/errors.hpp"
#include "osagent/util.hpp"

namespace osagent {

using json = nlohmann::json;

HttpModelBackend::HttpModelBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {
    std::string url = cfg_.endpoint;
    std::string rest;
    if (starts_with(url, "http://")) {
        rest = url.substr(7);
    } else {
        throw SchemaError("endpoint must start with http:// : " + url);
    }
    size_t slash = rest.find('/');
    std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : rest.substr(slash);
    size_t colon = hostport.find(':');
    if (colon == std::string::npos) {
        host_ = hostport;
        port_ = 80;
    } else {
        host_ = hostport.substr(0, colon);
        port_ = std::stoi(hostport.substr(colon + 1));
    }
    if (host_.empty()) throw SchemaError("endpoint has no host: " + url);
}

std::string HttpModelBackend::build_request_body(const ModelRequest& req,
                                                 const HttpBackendConfig& cfg) {
    json user_content = json::array();
    user_content.push_back({{"type", "text"}, {"text", req.user_text}});
    for (const Image* img : req.images) {
        std::string ppm = encode_ppm(*img);
        user_content.push_back({{"type", "image"},
                                {"format", "ppm"},
                                {"encoding", "base64"},
                                {"data", base64_encode(ppm)}});
    }
    json body = {
        {"model", cfg.model},
        {"temperature", cfg.temperature},
        {"messages",
         json::array({json{{"role", "system"},
                           {"content", json::array({{{"type", "text"}, {"text", req.system_text}}})}},
                      json{{"role", "user"}, {"content", user_content}}})},
    };
    return body.dump();
}

std::string HttpModelBackend::generate(const ModelRequest& req) {
    std::string body = build_request_body(req, cfg_);

    httplib::Headers headers;
    if (!cfg_.auth_env.empty()) {
        const char* token = std::getenv(cfg_.auth_env.c_str());
        // The token value stays out of logs and error text by design.
        if (token && *token)
            headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    std::string last_error;
    for (int attempt = 0; attempt < cfg_.max_tries; attempt++) {
        if (attempt > 0 && cfg_.sleep_between_tries) {
            int ms = std::min(cfg_.backoff_base_ms << (attempt - 1), 2000);
            std::this_thread::sleep_for(std::chrono::milliseconds(ms));
        }

        httplib::Client client(host_, port_);
        client.set_connection_timeout(0, cfg_.timeout_ms * 1000);
        client.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);

        httplib::Result res = client.Post(path_, headers, body, "application/json");
        if (!res) {
            last_error = "connection failed (" + std::string(httplib::to_string(res.error())) + ")";
            continue;
        }
        if (res->status != 200) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        try {
            json j = json::parse(res->body);
            if (!j.contains("text") || !j["text"].is_string()) {
                last_error = "response missing \"text\" field";
                continue;
            }
            return j["text"];
        } catch (const json::exception& ex) {
            last_error = std::string("response not valid JSON: ") + ex.what();
            continue;
        }
    }
    throw BackendUnavailableError("model endpoint unreachable after " +
                                  std::to_string(cfg_.max_tries) + " tries: " + last_error);
}

} // namespace osagent
