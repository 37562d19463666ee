/** Trailing-edge debounce used for re-estimate scheduling. */

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  /** Run a pending call immediately instead of waiting out the delay. */
  flush(): void;
  pending(): boolean;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): Debounced<A> {
  let handle: ReturnType<typeof setTimeout> | null = null;
  let lastArgs: A | null = null;

  const fire = () => {
    handle = null;
    const args = lastArgs as A;
    lastArgs = null;
    fn(...args);
  };

  const debounced = (...args: A) => {
    lastArgs = args;
    if (handle !== null) clearTimeout(handle);
    handle = setTimeout(fire, waitMs);
  };
  debounced.cancel = () => {
    if (handle !== null) clearTimeout(handle);
    handle = null;
    lastArgs = null;
  };
  debounced.flush = () => {
    if (handle !== null) {
      clearTimeout(handle);
      fire();
    }
  };
  debounced.pending = () => handle !== null;
  return debounced;
}
