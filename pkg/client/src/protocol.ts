/** Message shapes for the line-delimited JSON policy protocol (version 1). */

export const PROTOCOL_VERSION = 1;

export interface HelloMessage {
  type: "hello";
  protocol: number;
  input_alphabet: string[];
  output_alphabet: string[];
}

export interface ReadyMessage {
  type: "ready";
  name: string;
  protocol?: number;
}

export interface ObserveMessage {
  type: "observe";
  turn: number;
  last_output: string[];
  transcript: [string[], string[]][];
}

export interface SendMessage {
  type: "send";
  word: string[];
}

export interface StopMessage {
  type: "stop";
}

export interface EndMessage {
  type: "end";
  outcome: string;
  final_goal: boolean;
}

export type HostMessage = HelloMessage | ObserveMessage | EndMessage;
export type ClientMessage = ReadyMessage | SendMessage | StopMessage;

export function parseHostMessage(line: string): HostMessage | null {
  let value: unknown;
  try {
    value = JSON.parse(line);
  } catch {
    return null;
  }
  if (typeof value !== "object" || value === null) {
    return null;
  }
  const msg = value as Record<string, unknown>;
  switch (msg.type) {
    case "hello":
      if (
        typeof msg.protocol === "number" &&
        isStringArray(msg.input_alphabet) &&
        isStringArray(msg.output_alphabet)
      ) {
        return msg as unknown as HelloMessage;
      }
      return null;
    case "observe":
      if (
        typeof msg.turn === "number" &&
        isStringArray(msg.last_output) &&
        Array.isArray(msg.transcript)
      ) {
        return msg as unknown as ObserveMessage;
      }
      return null;
    case "end":
      if (typeof msg.outcome === "string" && typeof msg.final_goal === "boolean") {
        return msg as unknown as EndMessage;
      }
      return null;
    default:
      return null;
  }
}

function isStringArray(value: unknown): value is string[] {
  return Array.isArray(value) && value.every((item) => typeof item === "string");
}
