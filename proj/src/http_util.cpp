#include "toc/http_util.hpp"

#include <cctype>
#include <cstdio>

#include <httplib.h>

#include "toc/errors.hpp"

namespace toc {

std::pair<std::unique_ptr<httplib::Client>, std::string>
make_http_client(const std::string& endpoint) {
    std::string rest = endpoint;
    const std::string scheme = "http://";
    if (rest.rfind(scheme, 0) == 0) rest = rest.substr(scheme.size());
    else if (rest.rfind("https://", 0) == 0)
        throw Error("https endpoints are not supported: " + endpoint);

    auto slash = rest.find('/');
    std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
    if (host.empty()) throw Error("endpoint has no host: " + endpoint);

    auto client = std::make_unique<httplib::Client>(scheme + host);
    client->set_connection_timeout(5);
    client->set_read_timeout(30);
    return {std::move(client), path};
}

std::string url_encode(const std::string& value) {
    std::string out;
    out.reserve(value.size());
    for (unsigned char c : value) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "%%%02X", c);
            out += buf;
        }
    }
    return out;
}

} // namespace toc
