import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, ConsoleApi, OfflineError } from "../../src/api.js";
import { freshDouble, recommendation, session, stubService } from "./helpers.js";

afterEach(() => vi.unstubAllGlobals());

describe("ConsoleApi", () => {
  it("lists returns from the body envelope", async () => {
    const double = freshDouble();
    double.sessions.push(session("r-1"), session("r-2", "decided", "repair"));
    stubService(double);
    const api = new ConsoleApi("http://svc.test");
    const sessions = await api.listReturns();
    expect(sessions.map((s) => s.return_id)).toEqual(["r-1", "r-2"]);
  });

  it("maps service error bodies onto ApiError", async () => {
    const double = freshDouble();
    stubService(double);
    const api = new ConsoleApi("http://svc.test");
    const err = await api.getRecommendation("ghost").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.code).toBe("not_found");
  });

  it("raises OfflineError when fetch itself fails", async () => {
    const double = freshDouble();
    double.failNetwork = true;
    stubService(double);
    const api = new ConsoleApi("http://svc.test");
    await expect(api.listReturns()).rejects.toBeInstanceOf(OfflineError);
  });

  it("surfaces 422 infeasible what-ifs with their code", async () => {
    const double = freshDouble();
    double.recommendations.set("r-1", recommendation());
    stubService(double);
    const api = new ConsoleApi("http://svc.test");
    const err = await api.whatIf("r-1", "reuse").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.code).toBe("infeasible_disposition");
  });

  it("posts decisions with a disposition body", async () => {
    const double = freshDouble();
    double.sessions.push(session("r-1", "recommended"));
    stubService(double);
    const api = new ConsoleApi("http://svc.test");
    const entry = await api.decide("r-1", "repair");
    expect(entry.chosen).toBe("repair");
    const post = double.requests.find((r) => r.path === "/returns/r-1/decision");
    expect(post?.body).toEqual({ disposition: "repair" });
  });
});
