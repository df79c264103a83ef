import { spawnSync } from "node:child_process";

/**
 * Resolve the CLI invocation.  GENSANITY_CLI overrides the default and is
 * split on whitespace, so both `gensanity` and `python3 -m gensanity` work.
 */
export function cliCommand(): string[] {
  const raw = process.env.GENSANITY_CLI ?? "gensanity";
  const parts = raw.split(/\s+/).filter((p) => p.length > 0);
  if (parts.length === 0) {
    throw new Error("GENSANITY_CLI is set but empty");
  }
  return parts;
}

/**
 * Run one CLI subcommand and return stdout.  Non-zero exits become Errors
 * carrying the CLI's own diagnostic text.
 */
export function runCli(args: string[], maxBuffer = 256 * 1024 * 1024): string {
  const [cmd, ...prefix] = cliCommand();
  const res = spawnSync(cmd as string, [...prefix, ...args], {
    encoding: "utf-8",
    maxBuffer,
  });
  if (res.error) {
    const hint =
      (res.error as NodeJS.ErrnoException).code === "ENOENT"
        ? ` (is the gensanity CLI installed? set GENSANITY_CLI to override the command)`
        : "";
    throw new Error(`failed to spawn ${cmd}: ${res.error.message}${hint}`);
  }
  if (res.status !== 0) {
    const detail = (res.stderr || res.stdout || "").trim();
    throw new Error(
      `gensanity ${args[0]} exited with status ${res.status}${detail ? `: ${detail}` : ""}`,
    );
  }
  return res.stdout;
}
