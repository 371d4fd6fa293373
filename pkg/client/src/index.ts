export { RemoteEnv, ProtocolError, ConnectionClosedError } from "./client.js";
export {
  Action,
  Float,
  Muscles,
  NULL_ACTION,
  Observation,
  ServerMessage,
  SessionConfig,
  Vocal,
  actionPayload,
  formatFloat,
  markFloats,
  scanForbiddenKeys,
  stableStringify,
} from "./protocol.js";
export {
  AssociatorExample,
  RunSummary,
  mulberry32,
  randomAgent,
  runExampleAgent,
} from "./agents.js";
