// Deterministic per-subtype colors: hash the id into a hue so every client
// paints the same subtype the same way without any configuration.

export function subtypeHue(subtypeId: string): number {
  let h = 2166136261
  for (let i = 0; i < subtypeId.length; i++) {
    h ^= subtypeId.charCodeAt(i)
    h = Math.imul(h, 16777619)
  }
  return (h >>> 0) % 360
}

export function subtypeColor(subtypeId: string): string {
  return `hsl(${subtypeHue(subtypeId)}, 70%, 80%)`
}

export function entityColor(): string {
  return "hsl(210, 30%, 88%)"
}
