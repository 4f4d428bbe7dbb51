/**
 * Single source of truth for everything the renderers draw.
 *
 * The store only ever holds payloads that came from the server and passed
 * validation; nothing in the UI is fabricated client-side.  Responses can
 * arrive out of order when requests overlap, so applyState() enforces
 * last-write-wins on model_version: a response older than what is already
 * rendered is dropped.
 */

import { StateView } from "./types.js";

export interface UiState {
  /** Last accepted server state, null until the first fetch lands. */
  state: StateView | null;
  /** Scatter displays predicted labels by default; true shows ground truth. */
  showTruth: boolean;
  /** Pool index awaiting a red/blue choice, null when nothing is selected. */
  pendingIndex: number | null;
  /** Set when the server reported our version stale (409) until re-fetch. */
  stale: boolean;
  /** Human-readable banner text, null when everything is healthy. */
  error: string | null;
}

export type Listener = (ui: UiState) => void;

export class Store {
  private ui: UiState = {
    state: null,
    showTruth: false,
    pendingIndex: null,
    stale: false,
    error: null,
  };
  private listeners: Listener[] = [];

  get current(): UiState {
    return this.ui;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener(this.ui);
    }
  }

  /**
   * Accept a server state unless it is older than the one on screen.
   * Returns true when the state was applied.
   */
  applyState(next: StateView): boolean {
    const prev = this.ui.state;
    if (prev !== null && next.model_version < prev.model_version) {
      return false;
    }
    const pending = this.ui.pendingIndex;
    const pendingStillOpen =
      pending !== null &&
      next.pool.some((p) => p.index === pending && !p.labeled);
    this.ui = {
      ...this.ui,
      state: next,
      pendingIndex: pendingStillOpen ? pending : null,
      stale: false,
      error: null,
    };
    this.notify();
    return true;
  }

  /**
   * Install a state unconditionally.  Only session replacement (reset)
   * uses this: the new session restarts at model_version 0, which the
   * monotone guard in applyState would otherwise reject.
   */
  replaceState(next: StateView): void {
    this.ui = {
      ...this.ui,
      state: next,
      pendingIndex: null,
      stale: false,
      error: null,
    };
    this.notify();
  }

  markStale(message: string): void {
    this.ui = { ...this.ui, stale: true, error: message };
    this.notify();
  }

  setError(message: string | null): void {
    this.ui = { ...this.ui, error: message };
    this.notify();
  }

  toggleTruth(showTruth: boolean): void {
    if (this.ui.showTruth === showTruth) return;
    this.ui = { ...this.ui, showTruth };
    this.notify();
  }

  /** Select an unlabeled pool point; selecting a labeled one is a no-op. */
  selectPoint(index: number | null): void {
    if (index !== null) {
      const state = this.ui.state;
      const point = state?.pool.find((p) => p.index === index);
      if (!point || point.labeled) return;
    }
    if (this.ui.pendingIndex === index) return;
    this.ui = { ...this.ui, pendingIndex: index };
    this.notify();
  }
}
