export { ApiClient, ApiRequestError } from "./api.js";
export type { FetchLike } from "./api.js";
export {
  apiNumber,
  escapeHtml,
  renderAuditPanel,
  renderComparison,
  renderConfigPanel,
  renderEpisodeTable,
  renderEvidenceDrill,
  renderFitPanel,
  renderInlineError,
  renderNetworkError,
  renderNotFound,
  renderProposals,
} from "./render.js";
export { Workbench } from "./workbench.js";
export type { ActionResult, HtmlSlot, WorkbenchSlots } from "./workbench.js";
export type * from "./types.js";
