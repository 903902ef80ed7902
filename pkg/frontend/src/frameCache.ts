// Frames are immutable for a given scene revision, so the cache key is
// (revision, frame index). Old revisions age out through the size cap.

const DEFAULT_CAPACITY = 256;

export class FrameCache {
  private readonly entries = new Map<string, string>();

  constructor(private readonly capacity: number = DEFAULT_CAPACITY) {
    if (!Number.isInteger(capacity) || capacity < 1) {
      throw new RangeError(`capacity must be a positive integer, got ${capacity}`);
    }
  }

  static key(revision: number, frameIndex: number): string {
    return `${revision}:${frameIndex}`;
  }

  get(revision: number, frameIndex: number): string | undefined {
    return this.entries.get(FrameCache.key(revision, frameIndex));
  }

  put(revision: number, frameIndex: number, svg: string): void {
    const key = FrameCache.key(revision, frameIndex);
    if (this.entries.has(key)) this.entries.delete(key);
    this.entries.set(key, svg);
    while (this.entries.size > this.capacity) {
      const oldest = this.entries.keys().next().value as string;
      this.entries.delete(oldest);
    }
  }

  get size(): number {
    return this.entries.size;
  }
}
