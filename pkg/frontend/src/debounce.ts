/** Trailing-edge debounce; drag gestures issue bounded request rates. */

export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  flush(): void;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void, waitMs = 150,
): Debounced<A> {
  let handle: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;

  const wrapped = (...args: A) => {
    pending = args;
    if (handle !== null) clearTimeout(handle);
    handle = setTimeout(() => {
      handle = null;
      const args2 = pending!;
      pending = null;
      fn(...args2);
    }, waitMs);
  };
  wrapped.cancel = () => {
    if (handle !== null) clearTimeout(handle);
    handle = null;
    pending = null;
  };
  wrapped.flush = () => {
    if (handle === null || pending === null) return;
    clearTimeout(handle);
    handle = null;
    const args = pending;
    pending = null;
    fn(...args);
  };
  return wrapped;
}
