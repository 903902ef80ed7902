// Pure time/frame arithmetic for the preview player and timeline.
// Frames are spaced 1/fps seconds apart; frame 0 is at t = 0.

export function clampPlayhead(seconds: number, durationS: number): number {
  if (!Number.isFinite(seconds) || seconds < 0) return 0;
  return Math.min(seconds, durationS);
}

export function frameIndexForTime(timeS: number, fps: number, frameCount: number): number {
  const index = Math.round(timeS * fps);
  return Math.max(0, Math.min(index, frameCount - 1));
}

export function timeForFrame(frameIndex: number, fps: number): number {
  return frameIndex / fps;
}

// Period-boundary frame indices come from the scene view; snapping converts
// them to seconds and picks the nearest one.
export function snapToBoundary(timeS: number, boundaryFrames: number[], fps: number): number {
  if (boundaryFrames.length === 0) return timeS;
  let best = boundaryFrames[0]! / fps;
  for (const frame of boundaryFrames) {
    const t = frame / fps;
    if (Math.abs(t - timeS) < Math.abs(best - timeS)) best = t;
  }
  return best;
}
