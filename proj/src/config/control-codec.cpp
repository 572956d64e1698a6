#include "metis/config/control-codec.hpp"

#include <fmt/format.h>
#include <functional>
#include <json.hpp>
#include <map>

namespace metis {

using Json = nlohmann::json;

namespace {

std::string
dump(const Json& json)
{
  return json.dump(-1, ' ', false, Json::error_handler_t::replace);
}

template<typename T>
std::optional<T>
optionalField(const Json& params, const char* key)
{
  auto it = params.find(key);
  if (it == params.end() || it->is_null()) {
    return std::nullopt;
  }
  return it->get<T>();
}

ListenerProtocol
listenerProtocolFromString(const std::string& text)
{
  for (auto protocol : {ListenerProtocol::Tcp, ListenerProtocol::Udp, ListenerProtocol::Local,
                        ListenerProtocol::Ether}) {
    if (text == toString(protocol)) {
      return protocol;
    }
  }
  throw CodecError(CodecErrorCode::BadJson, fmt::format("unknown listener kind '{}'", text));
}

TunnelProtocol
tunnelProtocolFromString(const std::string& text)
{
  if (text == "tcp") {
    return TunnelProtocol::Tcp;
  }
  if (text == "udp") {
    return TunnelProtocol::Udp;
  }
  throw CodecError(CodecErrorCode::BadJson, fmt::format("unknown connection kind '{}'", text));
}

struct ParamsEncoder
{
  std::pair<std::string, Json>
  operator()(const AddListenerCommand& c) const
  {
    Json params{{"kind", toString(c.protocol)}, {"symbolic", c.symbolic}, {"address", c.address}};
    if (c.port) {
      params["port"] = *c.port;
    }
    if (c.etherType) {
      params["ethertype"] = *c.etherType;
    }
    return {"add_listener", params};
  }

  std::pair<std::string, Json>
  operator()(const AddConnectionCommand& c) const
  {
    Json params{{"kind", toString(c.protocol)}, {"symbolic", c.symbolic},
                {"remote_host", c.remoteHost}, {"remote_port", c.remotePort}};
    if (c.localHost) {
      params["local_host"] = *c.localHost;
    }
    if (c.localPort) {
      params["local_port"] = *c.localPort;
    }
    return {"add_connection", params};
  }

  std::pair<std::string, Json>
  operator()(const AddConnectionEtherCommand& c) const
  {
    return {"add_connection_ether",
            {{"symbolic", c.symbolic}, {"dmac", c.dmac}, {"interface", c.interface}}};
  }

  std::pair<std::string, Json>
  operator()(const AddRouteCommand& c) const
  {
    return {"add_route",
            {{"symbolic", c.symbolic}, {"prefix", c.prefix.segments()}, {"cost", c.cost}}};
  }

  std::pair<std::string, Json>
  operator()(const ListConnectionsCommand&) const
  {
    return {"list_connections", Json::object()};
  }

  std::pair<std::string, Json>
  operator()(const ListInterfacesCommand&) const
  {
    return {"list_interfaces", Json::object()};
  }

  std::pair<std::string, Json>
  operator()(const ListRoutesCommand&) const
  {
    return {"list_routes", Json::object()};
  }

  std::pair<std::string, Json>
  operator()(const RemoveConnectionCommand& c) const
  {
    return {"remove_connection", {{"args", c.args}}};
  }

  std::pair<std::string, Json>
  operator()(const RemoveRouteCommand& c) const
  {
    return {"remove_route", {{"args", c.args}}};
  }

  std::pair<std::string, Json>
  operator()(const QuitCommand&) const
  {
    return {"quit", Json::object()};
  }

  std::pair<std::string, Json>
  operator()(const SetDebugCommand&) const
  {
    return {"set_debug", Json::object()};
  }

  std::pair<std::string, Json>
  operator()(const UnsetDebugCommand&) const
  {
    return {"unset_debug", Json::object()};
  }

  std::pair<std::string, Json>
  operator()(const HelpCommand& c) const
  {
    Json params = Json::object();
    if (c.topic) {
      params["topic"] = *c.topic;
    }
    return {"help", params};
  }
};

using ParamsDecoder = std::function<ControlCommand(const Json&)>;

const std::map<std::string, ParamsDecoder, std::less<>>&
decoders()
{
  static const std::map<std::string, ParamsDecoder, std::less<>> table{
    {"add_listener", [] (const Json& p) -> ControlCommand {
      return AddListenerCommand{listenerProtocolFromString(p.at("kind").get<std::string>()),
                                p.at("symbolic").get<std::string>(),
                                p.at("address").get<std::string>(),
                                optionalField<std::uint16_t>(p, "port"),
                                optionalField<std::uint16_t>(p, "ethertype")};
    }},
    {"add_connection", [] (const Json& p) -> ControlCommand {
      return AddConnectionCommand{tunnelProtocolFromString(p.at("kind").get<std::string>()),
                                  p.at("symbolic").get<std::string>(),
                                  p.at("remote_host").get<std::string>(),
                                  p.at("remote_port").get<std::uint16_t>(),
                                  optionalField<std::string>(p, "local_host"),
                                  optionalField<std::uint16_t>(p, "local_port")};
    }},
    {"add_connection_ether", [] (const Json& p) -> ControlCommand {
      return AddConnectionEtherCommand{p.at("symbolic").get<std::string>(),
                                       p.at("dmac").get<std::string>(),
                                       p.at("interface").get<std::string>()};
    }},
    {"add_route", [] (const Json& p) -> ControlCommand {
      return AddRouteCommand{p.at("symbolic").get<std::string>(),
                             Name(p.at("prefix").get<std::vector<std::string>>()),
                             p.at("cost").get<std::uint32_t>()};
    }},
    {"list_connections", [] (const Json&) -> ControlCommand { return ListConnectionsCommand{}; }},
    {"list_interfaces", [] (const Json&) -> ControlCommand { return ListInterfacesCommand{}; }},
    {"list_routes", [] (const Json&) -> ControlCommand { return ListRoutesCommand{}; }},
    {"remove_connection", [] (const Json& p) -> ControlCommand {
      return RemoveConnectionCommand{p.value("args", std::vector<std::string>{})};
    }},
    {"remove_route", [] (const Json& p) -> ControlCommand {
      return RemoveRouteCommand{p.value("args", std::vector<std::string>{})};
    }},
    {"quit", [] (const Json&) -> ControlCommand { return QuitCommand{}; }},
    {"set_debug", [] (const Json&) -> ControlCommand { return SetDebugCommand{}; }},
    {"unset_debug", [] (const Json&) -> ControlCommand { return UnsetDebugCommand{}; }},
    {"help", [] (const Json& p) -> ControlCommand {
      return HelpCommand{optionalField<std::string>(p, "topic")};
    }},
  };
  return table;
}

Json
parseObject(std::string_view text)
{
  Json json = Json::parse(text.begin(), text.end(), nullptr, false);
  if (json.is_discarded()) {
    throw CodecError(CodecErrorCode::BadJson, "malformed JSON");
  }
  if (!json.is_object()) {
    throw CodecError(CodecErrorCode::BadJson, "expected a JSON object");
  }
  return json;
}

} // namespace

std::string
encodeRequest(const ControlCommand& command, std::uint64_t seq)
{
  auto [action, params] = std::visit(ParamsEncoder{}, command);
  return dump(Json{{"seq", seq}, {"action", action}, {"params", params}});
}

ControlRequest
decodeRequest(std::string_view text)
{
  Json json = parseObject(text);
  ControlRequest request;
  try {
    request.seq = json.at("seq").get<std::uint64_t>();
  }
  catch (const Json::exception& e) {
    throw CodecError(CodecErrorCode::BadJson, e.what());
  }

  try {
    auto action = json.at("action").get<std::string>();
    auto it = decoders().find(action);
    if (it == decoders().end()) {
      throw CodecError(CodecErrorCode::UnknownAction, fmt::format("unknown action '{}'", action),
                       request.seq);
    }
    Json params = json.value("params", Json::object());
    if (!params.is_object()) {
      throw CodecError(CodecErrorCode::BadJson, "params must be an object", request.seq);
    }
    request.command = it->second(params);
    return request;
  }
  catch (const CodecError& e) {
    throw CodecError(e.code(), e.what(), request.seq);
  }
  catch (const Json::exception& e) {
    throw CodecError(CodecErrorCode::BadJson, e.what(), request.seq);
  }
}

std::string
encodeResponse(const ControlResponse& response)
{
  return dump(Json{{"seq", response.seq},
                   {"status", response.isAck() ? "ACK" : "NACK"},
                   {"message", response.message},
                   {"rows", response.rows}});
}

ControlResponse
decodeResponse(std::string_view text)
{
  Json json = parseObject(text);
  try {
    ControlResponse response;
    response.seq = json.at("seq").get<std::uint64_t>();
    auto status = json.at("status").get<std::string>();
    if (status == "ACK") {
      response.status = ControlStatus::Ack;
    }
    else if (status == "NACK") {
      response.status = ControlStatus::Nack;
    }
    else {
      throw CodecError(CodecErrorCode::BadJson, fmt::format("unknown status '{}'", status));
    }
    response.message = json.value("message", std::string{});
    response.rows = json.value("rows", std::vector<std::string>{});
    return response;
  }
  catch (const Json::exception& e) {
    throw CodecError(CodecErrorCode::BadJson, e.what());
  }
}

} // namespace metis
