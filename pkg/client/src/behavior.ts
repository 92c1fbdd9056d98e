/**
 * Decision logic for the reference client.
 *
 * The scripted behavior is the password-list attacker: send the username
 * first, then walk a password list whenever the target prompts again
 * (either the password prompt or the wrong-password warning).  The stub
 * behavior shows where a generative-model call would slot in.
 */

import { ObserveMessage } from "./protocol";

export type Decision = { kind: "send"; word: string[] } | { kind: "stop" };

export interface Behavior {
  decide(observe: ObserveMessage): Decision;
}

export const DEFAULT_USERNAME = "admin";
export const DEFAULT_PASSWORDS = ["pw1", "pw2", "letmein"];
const PROMPTS = ["PASS?", "WARN"];

export class ScriptedBehavior implements Behavior {
  private cursor = 0;

  constructor(
    private readonly username: string = DEFAULT_USERNAME,
    private readonly passwords: string[] = DEFAULT_PASSWORDS
  ) {}

  decide(observe: ObserveMessage): Decision {
    if (observe.turn === 0) {
      return { kind: "send", word: [this.username] };
    }
    const prompted = PROMPTS.some((p) => observe.last_output.includes(p));
    if (prompted && this.cursor < this.passwords.length) {
      const word = [this.passwords[this.cursor]];
      this.cursor += 1;
      return { kind: "send", word };
    }
    return { kind: "stop" };
  }
}

/**
 * Hook for plugging in a model: return the next word, or null to stop.
 * The default implementation never proposes anything, keeping the repo
 * free of inference dependencies; swap it for a real call if you want a
 * model in the loop.
 */
export type ModelHook = (observe: ObserveMessage) => string[] | null;

export const defaultModelHook: ModelHook = () => null;

export class StubBehavior implements Behavior {
  constructor(private readonly hook: ModelHook = defaultModelHook) {}

  decide(observe: ObserveMessage): Decision {
    const word = this.hook(observe);
    if (word === null || word.length === 0) {
      return { kind: "stop" };
    }
    return { kind: "send", word };
  }
}
