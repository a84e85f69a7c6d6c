/**
 * Entry point: wires the API client, session controller, and renderer.
 *
 * The service origin comes from the `api` query parameter, falling back to
 * the page's own origin (for deployments that proxy the API).
 */

import { SurveyApi } from "./api.js";
import { renderDone, renderProgress, renderQuestion } from "./render.js";
import { SessionController } from "./state.js";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return (fromQuery ?? window.location.origin).replace(/\/$/, "");
}

async function redraw(
  controller: SessionController,
  app: HTMLElement,
  progress: HTMLElement,
): Promise<void> {
  renderProgress(progress, controller.progress);
  const question = controller.question;
  if (question === null) {
    renderDone(app);
    return;
  }
  renderQuestion(app, question, {
    onSubmit: (answer) => controller.submit(answer),
    onAdvanced: () => void redraw(controller, app, progress),
  });
}

async function boot(): Promise<void> {
  const app = document.getElementById("app");
  const progress = document.getElementById("progress");
  if (!app || !progress) throw new Error("missing #app or #progress");
  const api = new SurveyApi(apiBase());
  try {
    const controller = await SessionController.begin(api);
    await redraw(controller, app, progress);
  } catch (err) {
    app.replaceChildren();
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = `could not reach the survey service: ${String(err)}`;
    app.append(banner);
  }
}

void boot();
