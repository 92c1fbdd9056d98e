/**
 * Reference external-policy client.
 *
 * Speaks the line-delimited JSON protocol over stdin/stdout: waits for
 * hello, answers ready, then answers each observe with send or stop until
 * the host ends the session.  Any malformed or out-of-order host message
 * is a fatal error with a diagnostic on stderr and a nonzero exit.
 */

import readline from "readline";
import { Behavior, ScriptedBehavior, StubBehavior } from "./behavior";
import {
  ClientMessage,
  HelloMessage,
  PROTOCOL_VERSION,
  parseHostMessage,
} from "./protocol";

type Phase = "awaiting-hello" | "serving" | "done";

export class ClientSession {
  private phase: Phase = "awaiting-hello";
  private inputAlphabet = new Set<string>();

  constructor(
    private readonly behavior: Behavior,
    private readonly emit: (msg: ClientMessage) => void,
    private readonly name = "pw-client"
  ) {}

  /** Handle one host line; returns an exit code once the session is over. */
  handleLine(line: string): number | undefined {
    if (line.trim() === "") {
      return this.fail(`blank line from host`);
    }
    const msg = parseHostMessage(line);
    if (msg === null) {
      return this.fail(`malformed host message: ${truncate(line)}`);
    }
    switch (this.phase) {
      case "awaiting-hello": {
        if (msg.type !== "hello") {
          return this.fail(`expected hello, got ${msg.type}`);
        }
        return this.handleHello(msg);
      }
      case "serving": {
        if (msg.type === "end") {
          this.phase = "done";
          return 0;
        }
        if (msg.type !== "observe") {
          return this.fail(`expected observe or end, got ${msg.type}`);
        }
        const decision = this.behavior.decide(msg);
        if (
          decision.kind === "send" &&
          decision.word.every((sym) => this.inputAlphabet.has(sym))
        ) {
          this.emit({ type: "send", word: decision.word });
        } else {
          // never emit out-of-alphabet symbols; stopping is always legal
          this.emit({ type: "stop" });
        }
        return undefined;
      }
      case "done":
        return 0;
    }
  }

  private handleHello(msg: HelloMessage): number | undefined {
    if (msg.protocol !== PROTOCOL_VERSION) {
      return this.fail(`unsupported protocol version ${msg.protocol}`);
    }
    this.inputAlphabet = new Set(msg.input_alphabet);
    this.phase = "serving";
    this.emit({ type: "ready", name: this.name, protocol: PROTOCOL_VERSION });
    return undefined;
  }

  private fail(reason: string): number {
    process.stderr.write(`client error: ${reason}\n`);
    this.phase = "done";
    return 2;
  }
}

function truncate(line: string): string {
  return line.length > 120 ? line.slice(0, 117) + "..." : line;
}

export function serve(behavior: Behavior): void {
  const session = new ClientSession(behavior, (msg) => {
    process.stdout.write(JSON.stringify(msg) + "\n");
  });
  const rl = readline.createInterface({ input: process.stdin, terminal: false });
  let finished = false;
  rl.on("line", (line) => {
    const code = session.handleLine(line);
    if (code !== undefined) {
      finished = true;
      rl.close();
      process.exit(code);
    }
  });
  rl.on("close", () => {
    if (!finished) {
      // host vanished without sending end
      process.stderr.write("client error: host closed the stream early\n");
      process.exit(1);
    }
  });
}

function main(): void {
  const args = process.argv.slice(2);
  let behavior: Behavior = new ScriptedBehavior();
  const flag = args.indexOf("--behavior");
  if (flag >= 0) {
    const which = args[flag + 1];
    if (which === "stub") {
      behavior = new StubBehavior();
    } else if (which !== "scripted") {
      process.stderr.write(`unknown behavior ${which}; use scripted or stub\n`);
      process.exit(2);
    }
  }
  serve(behavior);
}

if (require.main === module) {
  main();
}
