// Session countdown. The service enforces the limit by timestamps; the
// client clock only drives the display.

export function remainingSeconds(startIso: string, limitSeconds: number,
                                 nowMs: number): number {
  const deadline = Date.parse(startIso) + limitSeconds * 1000;
  return Math.max(0, (deadline - nowMs) / 1000);
}

export function formatClock(seconds: number): string {
  const whole = Math.ceil(seconds);
  const minutes = Math.floor(whole / 60);
  const rest = whole % 60;
  return `${String(minutes).padStart(2, "0")}:${String(rest).padStart(2, "0")}`;
}

export function isExpired(startIso: string, limitSeconds: number,
                          nowMs: number): boolean {
  return remainingSeconds(startIso, limitSeconds, nowMs) <= 0;
}
